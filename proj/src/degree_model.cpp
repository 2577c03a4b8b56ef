#include "cmspectra/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cmspectra {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view s) {
  s = trim(s);
  std::string tmp(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tmp, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("degree spec: bad number '" + tmp + "'");
  }
  if (used != tmp.size()) throw std::invalid_argument("degree spec: bad number '" + tmp + "'");
  return v;
}

// Splits on commas that are not nested inside parentheses.
std::vector<std::string_view> split_args(std::string_view s) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  auto last = trim(s.substr(start));
  if (!last.empty() || !out.empty()) out.push_back(last);
  return out;
}

DiscreteMeasure parse_atom_list(std::string_view s) {
  std::vector<Atom> atoms;
  for (std::string_view item : split_args(s)) {
    const auto colon = item.find(':');
    require(colon != std::string_view::npos, "degree spec: atoms need location:weight pairs");
    atoms.push_back({parse_number(item.substr(0, colon)), parse_number(item.substr(colon + 1))});
  }
  require(!atoms.empty(), "degree spec: empty atom list");
  for (const Atom& a : atoms) {
    require(a.location >= 0.0, "degree spec: atom locations must be nonnegative");
    require(a.weight > 0.0, "degree spec: atom weights must be positive");
  }
  return DiscreteMeasure::from_unnormalized(std::move(atoms));
}

ContinuousLaw parse_continuous(std::string_view name, const std::vector<std::string_view>& args) {
  auto arity = [&](std::size_t k) {
    if (args.size() != k) {
      throw std::invalid_argument("degree spec: wrong argument count for " + std::string(name));
    }
  };
  if (name == "uniform") {
    arity(2);
    return ContinuousLaw::uniform(parse_number(args[0]), parse_number(args[1]));
  }
  if (name == "exponential") {
    arity(1);
    return ContinuousLaw::exponential(parse_number(args[0]));
  }
  if (name == "one-plus-exponential") {
    arity(1);
    return ContinuousLaw::one_plus_exponential(parse_number(args[0]));
  }
  throw std::invalid_argument("degree spec: unknown law '" + std::string(name) + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// ContinuousLaw

ContinuousLaw ContinuousLaw::point(double location) {
  require(location > 0.0, "point law: location must be positive");
  return ContinuousLaw(Family::kPoint, location, 0.0);
}

ContinuousLaw ContinuousLaw::uniform(double lo, double hi) {
  require(lo >= 0.0 && hi > lo, "uniform law: need 0 <= lo < hi");
  return ContinuousLaw(Family::kUniform, lo, hi);
}

ContinuousLaw ContinuousLaw::exponential(double rate) {
  require(rate > 0.0 && std::isfinite(rate), "exponential law: rate must be positive");
  return ContinuousLaw(Family::kExponential, rate, 0.0);
}

ContinuousLaw ContinuousLaw::one_plus_exponential(double rate) {
  require(rate > 0.0 && std::isfinite(rate), "one-plus-exponential law: rate must be positive");
  return ContinuousLaw(Family::kOnePlusExponential, rate, 0.0);
}

ContinuousLaw ContinuousLaw::dilated(double factor) const {
  require(factor > 0.0 && std::isfinite(factor), "ContinuousLaw::dilated: factor must be positive");
  ContinuousLaw out = *this;
  out.scale_ *= factor;
  return out;
}

double ContinuousLaw::mean() const {
  double raw = 0.0;
  switch (family_) {
    case Family::kPoint: raw = p1_; break;
    case Family::kUniform: raw = 0.5 * (p1_ + p2_); break;
    case Family::kExponential: raw = 1.0 / p1_; break;
    case Family::kOnePlusExponential: raw = 1.0 + 1.0 / p1_; break;
  }
  return scale_ * raw;
}

double ContinuousLaw::second_moment() const {
  double raw = 0.0;
  switch (family_) {
    case Family::kPoint: raw = p1_ * p1_; break;
    case Family::kUniform: raw = (p1_ * p1_ + p1_ * p2_ + p2_ * p2_) / 3.0; break;
    case Family::kExponential: raw = 2.0 / (p1_ * p1_); break;
    case Family::kOnePlusExponential: raw = 1.0 + 2.0 / p1_ + 2.0 / (p1_ * p1_); break;
  }
  return scale_ * scale_ * raw;
}

double ContinuousLaw::raw_quantile(double p) const {
  switch (family_) {
    case Family::kPoint: return p1_;
    case Family::kUniform: return p1_ + p * (p2_ - p1_);
    case Family::kExponential: return -std::log1p(-p) / p1_;
    case Family::kOnePlusExponential: return 1.0 - std::log1p(-p) / p1_;
  }
  return 0.0;
}

double ContinuousLaw::quantile(double p) const {
  require(p >= 0.0 && p <= 1.0, "ContinuousLaw::quantile: p outside [0,1]");
  return scale_ * raw_quantile(p);
}

double ContinuousLaw::raw_slab_integral(double p_lo, double p_hi) const {
  const double mass = p_hi - p_lo;
  // Integral over the slab of (x + 1/rate) exp(-rate x) terms for the exponential part.
  auto exp_part = [&](double rate) {
    auto term = [&](double p) {
      if (p >= 1.0) return 0.0;
      const double x = -std::log1p(-p) / rate;
      return (x + 1.0 / rate) * (1.0 - p);
    };
    return term(p_lo) - term(p_hi);
  };
  switch (family_) {
    case Family::kPoint: return p1_ * mass;
    case Family::kUniform: return mass * (p1_ + 0.5 * (p_lo + p_hi) * (p2_ - p1_));
    case Family::kExponential: return exp_part(p1_);
    case Family::kOnePlusExponential: return mass + exp_part(p1_);
  }
  return 0.0;
}

double ContinuousLaw::slab_integral(double p_lo, double p_hi) const {
  require(0.0 <= p_lo && p_lo <= p_hi && p_hi <= 1.0, "ContinuousLaw::slab_integral: bad slab");
  return scale_ * raw_slab_integral(p_lo, p_hi);
}

double ContinuousLaw::sample(Rng& rng) const {
  double raw = 0.0;
  switch (family_) {
    case Family::kPoint: raw = p1_; break;
    case Family::kUniform: raw = std::uniform_real_distribution<double>(p1_, p2_)(rng); break;
    case Family::kExponential: raw = std::exponential_distribution<double>(p1_)(rng); break;
    case Family::kOnePlusExponential:
      raw = 1.0 + std::exponential_distribution<double>(p1_)(rng);
      break;
  }
  return scale_ * raw;
}

std::string ContinuousLaw::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (family_) {
    case Family::kPoint: os << "point(" << p1_ << ")"; break;
    case Family::kUniform: os << "uniform(" << p1_ << "," << p2_ << ")"; break;
    case Family::kExponential: os << "exponential(" << p1_ << ")"; break;
    case Family::kOnePlusExponential: os << "one-plus-exponential(" << p1_ << ")"; break;
  }
  if (scale_ != 1.0) os << "*" << scale_;
  return os.str();
}

// ---------------------------------------------------------------------------
// DegreeSpec

DegreeSpec DegreeSpec::atoms(const DiscreteMeasure& m) {
  require(m.nonnegative(), "degree spec: atoms must be nonnegative");
  return DegreeSpec(AtomicDegrees{m.normalized_to_unit_mean()});
}

DegreeSpec DegreeSpec::two_atom(double alpha, double beta) {
  require(alpha > 1.0 && beta > 0.0 && beta < 1.0, "two-atom spec: need alpha > 1 > beta > 0");
  const double q = (1.0 - beta) / (alpha - beta);
  return atoms(DiscreteMeasure({{beta, 1.0 - q}, {alpha, q}}));
}

DegreeSpec DegreeSpec::iid(const ContinuousLaw& law) {
  return DegreeSpec(IidDegrees{law.normalized_to_unit_mean()});
}

DegreeSpec DegreeSpec::two_scale(const ContinuousLaw& law) {
  return DegreeSpec(TwoScaleDegrees{law.normalized_to_unit_mean()});
}

double DegreeSpec::normalized_mean() const {
  return std::visit([](const auto& k) { return k.law.mean(); }, kind_);
}

std::string DegreeSpec::describe() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AtomicDegrees>) {
          return "atoms(" + k.law.to_string() + ")";
        } else if constexpr (std::is_same_v<T, IidDegrees>) {
          return "iid(" + k.law.describe() + ")";
        } else {
          return "two-scale(" + k.law.describe() + ")";
        }
      },
      kind_);
}

DegreeSpec parse_degree_spec(std::string_view text) {
  text = trim(text);
  const auto open = text.find('(');
  require(open != std::string_view::npos && text.back() == ')',
          "degree spec: expected name(arguments)");
  const std::string_view name = trim(text.substr(0, open));
  const std::string_view body = text.substr(open + 1, text.size() - open - 2);
  if (name == "atoms") return DegreeSpec::atoms(parse_atom_list(body));
  const auto args = split_args(body);
  if (name == "point") {
    require(args.size() == 1, "degree spec: point takes one argument");
    const double c = parse_number(args[0]);
    require(c > 0.0, "degree spec: point location must be positive");
    return DegreeSpec::atoms(DiscreteMeasure::point_mass(c));
  }
  if (name == "two-atom") {
    require(args.size() == 2, "degree spec: two-atom takes alpha,beta");
    return DegreeSpec::two_atom(parse_number(args[0]), parse_number(args[1]));
  }
  if (name == "two-scale") {
    require(args.size() == 1, "degree spec: two-scale wraps one law");
    const DegreeSpec inner = parse_degree_spec(args[0]);
    const auto* iid = std::get_if<IidDegrees>(&inner.kind());
    require(iid != nullptr, "degree spec: two-scale needs a continuous inner law");
    return DegreeSpec::two_scale(iid->law);
  }
  return DegreeSpec::iid(parse_continuous(name, args));
}

DegreeSpec read_degree_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("degree spec: cannot open " + path.string());
  std::map<std::string, std::string, std::less<>> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const auto eq = sv.find('=');
    require(eq != std::string_view::npos, "degree spec file: expected key=value");
    kv[std::string(trim(sv.substr(0, eq)))] = std::string(trim(sv.substr(eq + 1)));
  }
  auto get = [&](std::string_view key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw std::invalid_argument("degree spec file: missing key '" + std::string(key) + "'");
    }
    return it->second;
  };
  const std::string& kind = get("kind");
  if (kind == "atoms") return DegreeSpec::atoms(parse_atom_list(get("atoms")));
  if (kind == "point") return parse_degree_spec("point(" + get("location") + ")");
  if (kind == "two-atom") {
    return DegreeSpec::two_atom(parse_number(get("alpha")), parse_number(get("beta")));
  }
  auto continuous = [&](const std::string& family) {
    if (family == "uniform") return ContinuousLaw::uniform(parse_number(get("a")), parse_number(get("b")));
    if (family == "exponential") return ContinuousLaw::exponential(parse_number(get("rate")));
    if (family == "one-plus-exponential") {
      return ContinuousLaw::one_plus_exponential(parse_number(get("rate")));
    }
    throw std::invalid_argument("degree spec file: unknown law '" + family + "'");
  };
  if (kind == "two-scale") return DegreeSpec::two_scale(continuous(get("base")));
  return DegreeSpec::iid(continuous(kind));
}

DegreeSpec load_degree_spec(const std::string& file_or_inline) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(file_or_inline, ec)) {
    return read_degree_spec_file(file_or_inline);
  }
  return parse_degree_spec(file_or_inline);
}

// ---------------------------------------------------------------------------
// DegreeSequence

std::int64_t DegreeSequence::total() const {
  return std::accumulate(degrees.begin(), degrees.end(), std::int64_t{0});
}

void validate(const DegreeSequence& seq) {
  require(!seq.degrees.empty(), "DegreeSequence: empty");
  for (auto d : seq.degrees) require(d >= 0, "DegreeSequence: negative degree");
  require(seq.total() % 2 == 0, "DegreeSequence: odd degree sum");
  const double expected = static_cast<double>(seq.total()) / static_cast<double>(seq.size());
  require(seq.omega == expected, "DegreeSequence: omega must equal 2|E|/n");
}

DegreeSequence make_degree_sequence(std::vector<std::int64_t> degrees) {
  DegreeSequence seq;
  seq.degrees = std::move(degrees);
  require(!seq.degrees.empty(), "DegreeSequence: empty");
  seq.omega = static_cast<double>(seq.total()) / static_cast<double>(seq.size());
  validate(seq);
  return seq;
}

namespace {

// Vertex counts per atom by largest remainder; ties go to the lower atom.
std::vector<std::size_t> apportion(const DiscreteMeasure& law, std::size_t n) {
  const auto atoms = law.atoms();
  std::vector<std::size_t> counts(atoms.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const double exact = atoms[a].weight * static_cast<double>(n);
    counts[a] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[a];
    remainders.push_back({exact - std::floor(exact), a});
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) {
    ++counts[remainders[k % remainders.size()].second];
  }
  return counts;
}

}  // namespace

DegreeSequence build_degree_sequence(const DegreeSpec& spec, std::size_t n,
                                     double omega_target, std::uint64_t seed) {
  require(n >= 2, "build_degree_sequence: need n >= 2");
  require(omega_target >= 1.0 && std::isfinite(omega_target),
          "build_degree_sequence: need omega_target >= 1");
  Rng rng(seed);
  std::vector<double> normalized(n);
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AtomicDegrees>) {
          const auto counts = apportion(k.law, n);
          std::size_t i = 0;
          for (std::size_t a = 0; a < counts.size(); ++a) {
            for (std::size_t c = 0; c < counts[a]; ++c) normalized[i++] = k.law.atoms()[a].location;
          }
        } else if constexpr (std::is_same_v<T, IidDegrees>) {
          for (auto& d : normalized) d = k.law.sample(rng);
        } else {
          for (auto& d : normalized) d = k.law.sample(rng);
          const double nn = static_cast<double>(n);
          const auto heavy = std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(std::sqrt(nn))));
          const double boost = std::sqrt(nn) / std::log(nn);
          for (std::size_t i = n - heavy; i < n; ++i) normalized[i] *= boost;
        }
      },
      spec.kind());

  DegreeSequence seq;
  seq.degrees.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    seq.degrees[i] = static_cast<std::int64_t>(std::floor(omega_target * normalized[i]));
  }
  if (seq.total() == 0) {
    throw std::invalid_argument("build_degree_sequence: spec produced no edges");
  }
  if (seq.total() % 2 != 0) seq.degrees.back() += 1;
  seq.omega = static_cast<double>(seq.total()) / static_cast<double>(n);
  return seq;
}

DiscreteMeasure degree_esd(const DegreeSequence& seq) {
  validate(seq);
  std::vector<double> values(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    values[i] = static_cast<double>(seq.degrees[i]) / seq.omega;
  }
  return DiscreteMeasure::uniform_on(values);
}

DiscreteMeasure size_bias(const DiscreteMeasure& m) {
  require(m.nonnegative(), "size_bias: measure must live on [0, inf)");
  const double mean = m.mean();
  require(mean > 0.0, "size_bias: zero mean");
  std::vector<Atom> out;
  out.reserve(m.size());
  for (const Atom& a : m.atoms()) {
    if (a.location > 0.0) out.push_back({a.location, a.location * a.weight / mean});
  }
  return DiscreteMeasure::from_unnormalized(std::move(out));
}

void write_degree_sequence(std::ostream& os, const DegreeSequence& seq) {
  for (auto d : seq.degrees) os << d << '\n';
}

}  // namespace cmspectra
