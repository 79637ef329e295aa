#include "coklab/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "coklab/errors.hpp"
#include "coklab/moments.hpp"
#include "coklab/montecarlo.hpp"
#include "coklab/nonabelian.hpp"
#include "coklab/padic.hpp"
#include "coklab/pgroup.hpp"

namespace coklab {

using Json = nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, s.find_last_not_of(" \t\r") - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

}  // namespace

// --- config ---

RunConfig RunConfig::parse(std::string_view text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  cfg.base_dir_ = base_dir;
  cfg.values_[""];
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (int line_no = 1; std::getline(in, raw); ++line_no) {
    const std::string line = trim(raw.substr(0, raw.find('#')));
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InvalidArgument(where + "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw InvalidArgument(where + "empty section name");
      cfg.values_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument(where + "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw InvalidArgument(where + "empty key");
    if (!cfg.values_[section].emplace(key, trim(std::string_view(line).substr(eq + 1))).second)
      throw InvalidArgument(where + "duplicate key '" + key + "'");
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), std::filesystem::absolute(path).parent_path());
}

std::optional<std::string> RunConfig::get(const std::string& section, const std::string& key) const {
  const auto s = values_.find(section);
  if (s == values_.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

void RunConfig::set(const std::string& section, const std::string& key, std::string value) {
  values_[section][key] = std::move(value);
}

void RunConfig::require_known(const std::string& section, const std::set<std::string>& allowed) const {
  const auto s = values_.find(section);
  if (s == values_.end()) return;
  for (const auto& [key, value] : s->second)
    if (!allowed.contains(key))
      throw InvalidArgument("unknown key '" + key + "' in [" + (section.empty() ? "top level" : section) + "]");
}

std::filesystem::path RunConfig::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  return p.is_absolute() || base_dir_.empty() ? p : base_dir_ / p;
}

std::string RunConfig::canonical(const std::string& section) const {
  std::string out;
  if (const auto top = values_.find(""); top != values_.end())
    for (const auto& [k, v] : top->second)
      if (k != "workers") out += k + " = " + v + "\n";
  if (const auto s = values_.find(section); s != values_.end() && !section.empty()) {
    out += "[" + section + "]\n";
    for (const auto& [k, v] : s->second) out += k + " = " + v + "\n";
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

namespace {

// --- typed access ---

class Section {
 public:
  Section(const RunConfig& cfg, std::string name) : cfg_(cfg), name_(std::move(name)) {}

  std::optional<std::string> raw(const std::string& key) const { return cfg_.get(name_, key); }
  std::string str(const std::string& key, const std::string& fallback) const { return raw(key).value_or(fallback); }
  std::string required(const std::string& key) const {
    auto v = raw(key);
    if (!v) throw InvalidArgument("[" + name_ + "] needs '" + key + "'");
    return *v;
  }

  template <class T>
  T number(const std::string& key, T fallback) const {
    const auto v = raw(key);
    return v ? convert<T>(key, *v) : fallback;
  }

  template <class T>
  std::vector<T> numbers(const std::string& key, std::vector<T> fallback) const {
    const auto v = raw(key);
    if (!v) return fallback;
    std::vector<T> out;
    for (const auto& item : split(*v, ',')) out.push_back(convert<T>(key, item));
    return out;
  }

  template <class T>
  T convert(const std::string& key, const std::string& text) const {
    T value{};
    std::istringstream in(text);
    if (!(in >> value) || !(in >> std::ws).eof())
      throw InvalidArgument("[" + name_ + "] " + key + ": cannot read '" + text + "'");
    if constexpr (std::is_unsigned_v<T>)
      if (trim(text).starts_with("-")) throw InvalidArgument("[" + name_ + "] " + key + " must be non-negative");
    return value;
  }

 private:
  const RunConfig& cfg_;
  std::string name_;
};

EntrySampler parse_sampler(const std::string& text, double epsilon) {
  if (text == "uniform" || text == "haar") return EntrySampler::haar_uniform();
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "categorical") {
    std::vector<double> probs;
    for (const auto& x : split(arg, ',')) probs.push_back(std::stod(x));
    return EntrySampler::categorical(std::move(probs), epsilon);
  }
  if (kind == "sparse") return EntrySampler::sparse(std::stod(arg));
  throw InvalidArgument("unknown sampler '" + text + "' (uniform, categorical:P0,P1,..., sparse:ALPHA)");
}

std::vector<Transform> parse_transforms(const std::string& text) {
  std::vector<Transform> out;
  for (const auto& t : split(text, ',')) out.push_back(Transform::parse(t));
  return out;
}

std::vector<PGroupType> parse_group_tuple(const std::string& text, std::uint64_t p) {
  std::vector<PGroupType> out;
  for (const auto& o : parse_tuple_label(text)) {
    if (!o) throw InvalidArgument("'overflow' is not a group");
    out.emplace_back(p, *o);
  }
  return out;
}

std::vector<std::vector<PGroupType>> parse_targets(const std::string& text, std::uint64_t p) {
  std::vector<std::vector<PGroupType>> out;
  for (const auto& t : split(text, ',')) out.push_back(parse_group_tuple(t, p));
  return out;
}

const std::set<std::string> kPlanKeys = {"p", "k", "u", "n", "trials", "sampler", "epsilon", "transforms", "targets",
                                         "z_threshold"};

ExperimentPlan read_plan(const Section& s, std::uint64_t seed) {
  ExperimentPlan plan;
  plan.p = s.number<std::uint64_t>("p", 2);
  require_prime(plan.p);
  plan.k = s.number<int>("k", 4);
  plan.u = s.number<int>("u", 0);
  plan.n_schedule = s.numbers<int>("n", {50});
  plan.trials = s.number<std::uint64_t>("trials", 1000);
  plan.sampler = parse_sampler(s.str("sampler", "uniform"), s.number<double>("epsilon", 0.0));
  plan.transforms = parse_transforms(s.str("transforms", "identity"));
  plan.targets = parse_targets(s.str("targets", ""), plan.p);
  plan.seed = seed;
  plan.validate();
  return plan;
}

// --- output ---

struct RunContext {
  std::string command;
  const RunConfig* config = nullptr;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  int workers = 1;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
}

// Summary JSON; the timestamp is the only line that changes between identical runs.
void write_summary(const RunContext& ctx, bool pass, Json results, std::ostream& out) {
  const std::string canonical = ctx.config->canonical(ctx.command);
  Json j;
  j["command"] = ctx.command;
  j["config"] = canonical;
  j["config_hash"] = sha256_hex(canonical);
  j["seed"] = ctx.seed;
  j["timestamp"] = utc_timestamp();
  j["pass"] = pass;
  j["results"] = std::move(results);
  const auto path = ctx.out_dir / (ctx.command + ".json");
  write_file(path, j.dump(2) + "\n");
  out << ctx.command << ": " << (pass ? "PASS" : "FAIL") << " (" << (ctx.out_dir / (ctx.command + ".csv")).string()
      << ", " << path.string() << ")\n";
}

std::string csv_rational(const Rational& r) { return to_string(r); }

// --- theory ---

Density product(const std::vector<Density>& parts, std::uint64_t p) {
  Density d;
  d.p = p;
  d.coefficient = 1;
  for (const auto& x : parts) {
    d.coefficient *= x.coefficient;
    d.c_inf_power += x.c_inf_power;
  }
  return d;
}

bool is_pshift_pair(const std::vector<Transform>& t) {
  return t.size() == 2 && t[0].kind == Transform::Kind::Shift && t[0].t == 0 && t[1].kind == Transform::Kind::PShift;
}

bool cmd_theory(const RunContext& ctx, Json& results) {
  const Section s(*ctx.config, "theory");
  ctx.config->require_known("theory", {"p", "u", "transforms", "targets"});
  const auto p = s.number<std::uint64_t>("p", 2);
  require_prime(p);
  const int u = s.number<int>("u", 0);
  if (u < 0) throw InvalidArgument("u must be non-negative");
  ExperimentPlan plan;
  plan.p = p;
  plan.u = u;
  plan.transforms = parse_transforms(s.str("transforms", "identity"));
  plan.targets = parse_targets(s.str("targets", ""), p);
  const bool pshift = is_pshift_pair(plan.transforms);
  for (const auto& t : plan.targets)
    if (t.size() != plan.transforms.size()) throw InvalidArgument("each target tuple needs one group per transform");
  if (!plan.targets.empty()) (void)theory_for_plan(plan);  // rejects unsupported transform sets

  std::ostringstream csv;
  csv << "tuple,symbolic,density,moment,moment_real\n";
  for (const auto& tuple : plan.targets) {
    Density d;
    if (pshift) {
      d = density_joint_pshift(tuple[0], tuple[1]);
    } else {
      std::vector<Density> parts;
      for (const auto& h : tuple) parts.push_back(density_cokernel(h, u));
      d = product(parts, p);
    }
    const Rational m = theory_mixed_moment(plan, tuple);
    csv << tuple_label(to_outcome(tuple)) << ',' << d.symbolic() << ',' << format_real(d.value()) << ','
        << csv_rational(m) << ',' << format_real(to_double(m)) << '\n';
  }
  write_file(ctx.out_dir / "theory.csv", csv.str());
  results["rows"] = plan.targets.size();
  return true;
}

// --- simulate ---

bool cmd_simulate(const RunContext& ctx, Json& results) {
  const Section s(*ctx.config, "simulate");
  ctx.config->require_known("simulate", kPlanKeys);
  const ExperimentPlan plan = read_plan(s, ctx.seed);
  const double threshold = s.number<double>("z_threshold", 3.0);
  const TheoryMap theory = plan.targets.empty() ? TheoryMap{} : theory_for_plan(plan);
  const JointEmpirical empirical = run_joint_cokernel(plan, ctx.workers);

  std::ostringstream csv;
  write_joint_csv(csv, empirical, plan.trials > 0 ? &theory : nullptr);
  write_file(ctx.out_dir / "simulate.csv", csv.str());

  bool pass = true;
  Json per_n = Json::array();
  for (const auto& table : empirical.per_n) {
    const auto report = compare_with_theory(table, theory, threshold);
    pass = pass && report.pass;
    per_n.push_back({{"n", report.n},
                     {"trials", report.trials},
                     {"max_abs_z", report.max_abs_z},
                     {"z_threshold", report.z_threshold},
                     {"pass", report.pass},
                     {"overflow_mass", report.overflow_mass},
                     {"unclassified_mass", report.unclassified_mass}});
  }
  results["sampler"] = plan.sampler.describe();
  results["per_n"] = std::move(per_n);
  return pass;
}

// --- moment ---

bool cmd_moment(const RunContext& ctx, Json& results) {
  const Section s(*ctx.config, "moment");
  auto keys = kPlanKeys;
  keys.insert("groups");
  ctx.config->require_known("moment", keys);
  const ExperimentPlan plan = read_plan(s, ctx.seed);
  const auto h = parse_group_tuple(s.required("groups"), plan.p);
  if (h.size() != plan.transforms.size()) throw InvalidArgument("'groups' needs one group per transform");
  const double threshold = s.number<double>("z_threshold", 3.0);
  const Rational limit = theory_mixed_moment(plan, h);
  const auto estimates = estimate_mixed_moment(plan, h, ctx.workers);

  std::ostringstream csv;
  csv << "n,trials,mean,estimate,stderr,theory,z\n";
  bool pass = true;
  Json per_n = Json::array();
  for (const auto& e : estimates) {
    const double diff = e.estimate - to_double(limit);
    double z = 0.0;
    if (e.trials > 0 && diff != 0.0)
      z = e.standard_error > 0 ? diff / e.standard_error : std::copysign(INFINITY, diff);
    const bool ok = std::abs(z) <= threshold;
    pass = pass && ok;
    csv << e.n << ',' << e.trials << ',' << csv_rational(e.mean) << ',' << format_real(e.estimate) << ','
        << format_real(e.standard_error) << ',' << csv_rational(limit) << ',' << format_real(z) << '\n';
    per_n.push_back({{"n", e.n}, {"estimate", e.estimate}, {"z", z}, {"pass", ok}});
  }
  write_file(ctx.out_dir / "moment.csv", csv.str());
  results["groups"] = tuple_label(to_outcome(h));
  results["theory"] = csv_rational(limit);
  results["per_n"] = std::move(per_n);
  return pass;
}

// --- invert ---

TruncatedLattice read_lattice(const Section& s) {
  std::vector<LatticeFactor> factors;
  for (const auto& item : split(s.str("primes", "2:2:2"), ',')) {
    const auto fields = split(item, ':');
    if (fields.size() != 3) throw InvalidArgument("lattice factor '" + item + "' is not p:max_exponent:max_rank");
    factors.push_back({s.convert<std::uint64_t>("primes", fields[0]), s.convert<int>("primes", fields[1]),
                       s.convert<int>("primes", fields[2])});
  }
  return TruncatedLattice(std::move(factors), s.number<int>("arity", 1));
}

bool cmd_invert(const RunContext& ctx, Json& results) {
  const Section s(*ctx.config, "invert");
  ctx.config->require_known("invert", {"primes", "arity", "moments"});
  const TruncatedLattice lattice = read_lattice(s);
  const std::string source = s.str("moments", "ones");
  LatticeFunction moments;
  if (source == "ones") {
    for (const auto& x : lattice.points()) moments[x] = 1;
  } else {
    std::ifstream in(ctx.config->resolve(source));
    if (!in) throw InvalidArgument("cannot read moment table " + ctx.config->resolve(source).string());
    moments = read_lattice_csv(in, lattice);
  }
  const LatticeFunction recovered = invert_moments(moments, lattice);
  const LatticeFunction again = moments_from_distribution(recovered, lattice);
  Rational residual = 0;
  for (const auto& [x, v] : moments) residual = std::max(residual, Rational(abs(again.at(x) - v)));

  const bool compare_cl = source == "ones" && lattice.primes().size() == 1;
  std::map<LatticePoint, double> cl;
  if (compare_cl) cl = cohen_lenstra_weights(lattice);
  std::ostringstream csv;
  csv << "tuple,value,value_real" << (compare_cl ? ",cohen_lenstra" : "") << '\n';
  Rational total = 0;
  double l1 = 0.0;
  bool nonnegative = true;
  for (const auto& x : lattice.points()) {
    const Rational& v = recovered.at(x);
    total += v;
    nonnegative = nonnegative && v >= 0;
    csv << lattice.label(x) << ',' << csv_rational(v) << ',' << format_real(to_double(v));
    if (compare_cl) {
      csv << ',' << format_real(cl.at(x));
      l1 += std::abs(to_double(v) - cl.at(x));
    }
    csv << '\n';
  }
  write_file(ctx.out_dir / "invert.csv", csv.str());
  results["cells"] = lattice.size();
  results["residual"] = csv_rational(residual);
  results["total_mass"] = csv_rational(total);
  results["nonnegative"] = nonnegative;
  if (compare_cl) results["l1_to_cohen_lenstra"] = l1;
  return residual == 0;
}

// --- nonabelian ---

bool cmd_nonabelian(const RunContext& ctx, Json& results) {
  const Section s(*ctx.config, "nonabelian");
  ctx.config->require_known("nonabelian", {"group", "group2", "n", "u", "b", "trials", "z_threshold"});
  const FiniteGroup h1 = build_group(s.str("group", "C2"));
  const auto group2 = s.raw("group2");
  const std::optional<FiniteGroup> h2 = group2 ? std::optional(build_group(*group2)) : std::nullopt;
  const auto ns = s.numbers<int>("n", {1, 2, 3, 4});
  const int u = s.number<int>("u", 0);
  if (u < 0) throw InvalidArgument("u must be non-negative");
  const std::string b_mode = s.str("b", "basis");
  const auto trials = s.number<std::uint64_t>("trials", 0);
  const double threshold = s.number<double>("z_threshold", 3.0);
  for (int n : ns)
    if (n < 0) throw InvalidArgument("n must be non-negative");
  if (trials > 0 && (!h2 || !h1.is_abelian() || !h2->is_abelian()))
    throw InvalidArgument("sampling ('trials') needs two abelian groups");

  auto words_for = [&](int n) {
    if (b_mode == "basis") return basis_inverse_words(n, u);
    if (b_mode == "identity") return std::vector<FreeGroupWord>(static_cast<std::size_t>(n + u));
    std::vector<FreeGroupWord> out;
    for (const auto& w : split(b_mode, ',')) out.push_back(FreeGroupWord::parse(w));
    return out;
  };
  // Validate every row before computing any of them.
  if (h2)
    for (int n : ns) {
      if (std::pow(double(h1.order()) * h2->order(), n) > kPairEnumerationLimit)
        throw InvalidArgument("n=" + std::to_string(n) + " exceeds the pair enumeration guard |H1|^n |H2|^n <= 1e7");
      const auto b = words_for(n);
      if (static_cast<int>(b.size()) != n + u)
        throw InvalidArgument("b needs n + u = " + std::to_string(n + u) + " words");
    }

  std::ostringstream csv;
  csv << "n,sur_free_count,expected_sur,expected_sur_real";
  if (h2) csv << ",limit,pair_moment_real" << (trials ? ",sampled,stderr,z" : "") << ",pair_moment";
  csv << '\n';
  const Rational limit = h2 ? Rational(1) / Rational(ipow(static_cast<std::uint64_t>(h1.order()) * h2->order(),
                                                          static_cast<unsigned>(u)))
                            : Rational(0);
  bool pass = true;
  Json rows = Json::array();
  for (int n : ns) {
    const Rational e = expected_sur_random_quotient(n, u, h1);
    csv << n << ',' << sur_free_count(n, h1) << ',' << csv_rational(e) << ',' << format_real(to_double(e));
    Json row = {{"n", n}, {"expected_sur", csv_rational(e)}};
    if (h2) {
      const auto b = words_for(n);
      const Rational m = pair_moment_random_quotients(n, u, h1, *h2, b);
      csv << ',' << csv_rational(limit) << ',' << format_real(to_double(m));
      row["pair_moment"] = csv_rational(m);
      if (trials) {
        const auto sample = sample_pair_moment(n, u, h1, *h2, b, trials, ctx.seed);
        const double diff = sample.estimate - to_double(m);
        const double z = diff == 0.0 ? 0.0 : diff / sample.standard_error;
        pass = pass && std::abs(z) <= threshold;
        csv << ',' << format_real(sample.estimate) << ',' << format_real(sample.standard_error) << ','
            << format_real(z);
        row["z"] = z;
      }
      csv << ',' << csv_rational(m);
    }
    csv << '\n';
    rows.push_back(std::move(row));
  }
  write_file(ctx.out_dir / "nonabelian.csv", csv.str());
  results["group"] = h1.name;
  if (h2) results["group2"] = h2->name;
  results["rows"] = std::move(rows);
  return pass;
}

// --- snf ---

bool cmd_snf(const RunContext& ctx, Json& results, std::ostream& out) {
  const Section s(*ctx.config, "snf");
  ctx.config->require_known("snf", {"matrix", "matrix_file"});
  MatModPk a = [&] {
    if (const auto inline_text = s.raw("matrix")) {
      std::istringstream in(*inline_text);
      return read_matrix(in);
    }
    const auto path = ctx.config->resolve(s.required("matrix_file"));
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read matrix " + path.string());
    return read_matrix(in);
  }();
  const SnfResult snf = smith_normal_form(a);
  const CokernelType cok = cokernel_type(a);
  std::ostringstream csv;
  csv << "index,exponent,saturated\n";
  for (std::size_t i = 0; i < snf.exponents.size(); ++i)
    csv << i << ',' << snf.exponents[i] << ',' << (snf.saturated(i) ? 1 : 0) << '\n';
  write_file(ctx.out_dir / "snf.csv", csv.str());
  const PGroupType type(a.prime(), cok.type);
  out << "diagonal exponents:";
  for (int e : snf.exponents) out << ' ' << e;
  out << "\ncokernel: " << type.to_string();
  if (cok.saturated())
    out << " (" << cok.saturated_parts << " saturated part(s): order at least " << a.prime() << '^' << a.precision()
        << ")";
  out << '\n';
  results["exponents"] = snf.exponents;
  results["cokernel"] = type.to_string();
  results["saturated_parts"] = cok.saturated_parts;
  return true;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"coklab: cokernels of random p-adic matrices and their moments"};
  app.require_subcommand(1);
  std::string config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"theory", "closed-form densities and moments for target groups"},
      {"simulate", "joint cokernel frequencies against theory"},
      {"moment", "Monte Carlo mixed moments"},
      {"invert", "recover a distribution from its moments"},
      {"nonabelian", "exact moments of random quotients of free groups"},
      {"snf", "Smith normal form of a matrix literal"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_option("--workers", workers, "worker threads");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    RunConfig config = RunConfig::load(config_path);
    RunContext ctx;
    ctx.command = app.get_subcommands().front()->get_name();
    config.require_known("", {"seed", "workers"});
    if (seed) config.set("", "seed", std::to_string(*seed));
    const Section top(config, "");
    ctx.seed = top.number<std::uint64_t>("seed", 0);
    config.set("", "seed", std::to_string(ctx.seed));
    ctx.workers = workers.value_or(top.number<int>("workers", 1));
    if (ctx.workers < 1) throw InvalidArgument("workers must be positive");
    ctx.config = &config;
    ctx.out_dir = out_dir;
    std::filesystem::create_directories(ctx.out_dir);

    Json results = Json::object();
    bool pass = false;
    if (ctx.command == "theory") pass = cmd_theory(ctx, results);
    else if (ctx.command == "simulate") pass = cmd_simulate(ctx, results);
    else if (ctx.command == "moment") pass = cmd_moment(ctx, results);
    else if (ctx.command == "invert") pass = cmd_invert(ctx, results);
    else if (ctx.command == "nonabelian") pass = cmd_nonabelian(ctx, results);
    else pass = cmd_snf(ctx, results, out);
    write_summary(ctx, pass, std::move(results), out);
    return pass ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace coklab
