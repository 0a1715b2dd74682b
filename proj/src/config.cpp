#include "latwave/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "latwave/error.hpp"

namespace latwave {

namespace pt = boost::property_tree;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_num(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Config, where + ": not a number: '" + s + "'");
  }
}

std::vector<double> parse_list(const std::string& s, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (item.find_first_not_of(" \t") != std::string::npos) out.push_back(parse_num(item, where));
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + num(v[k]);
  return s;
}

Vec parse_vec(const std::string& s, const std::string& where) {
  const auto v = parse_list(s, where);
  if (v.empty() || v.size() > kMaxDim) throw Error(ErrorKind::Config, where + ": expected 1 to 3 components");
  Vec out{};
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k];
  return out;
}

std::string vec_text(const Vec& v, int n) { return list_text(std::vector<double>(v.begin(), v.begin() + n)); }

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}
  bool has(const std::string& key) const { return tree_.get_optional<std::string>(pt::ptree::path_type(key, '/')).has_value(); }
  std::string str(const std::string& key) const {
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '/'));
    if (!v) throw Error(ErrorKind::Config, "missing key " + key);
    return *v;
  }
  double number(const std::string& key) const { return parse_num(str(key), key); }
  Vec vec(const std::string& key) const { return parse_vec(str(key), key); }
  bool has_section(const std::string& s) const { return tree_.get_child_optional(pt::ptree::path_type(s, '/')).has_value(); }

 private:
  const pt::ptree& tree_;
};

void put(pt::ptree& t, const std::string& key, const std::string& value) { t.put(pt::ptree::path_type(key, '/'), value); }

void write_data(pt::ptree& t, const std::string& s, const DataFunction& d, int n) {
  using K = DataFunction::Kind;
  const std::string p = s + "/";
  switch (d.kind()) {
    case K::Constant:
      put(t, p + "kind", "constant");
      put(t, p + "value", num(d.amplitude()));
      return;
    case K::Affine:
      put(t, p + "kind", "affine");
      put(t, p + "gradient", vec_text(d.alpha(), n));
      put(t, p + "offset", num(d.offset()));
      return;
    case K::Gaussian:
    case K::ModulatedGaussian:
      put(t, p + "kind", d.kind() == K::Gaussian ? "gaussian" : "modulated_gaussian");
      put(t, p + "center", vec_text(d.center(), n));
      put(t, p + "width", num(d.width()));
      put(t, p + "amplitude", num(d.amplitude()));
      if (d.kind() == K::ModulatedGaussian) put(t, p + "carrier", vec_text(d.alpha(), n));
      return;
    case K::PlaneWave:
      put(t, p + "kind", "plane_wave");
      put(t, p + "alpha", vec_text(d.alpha(), n));
      put(t, p + "amplitude", num(d.amplitude()));
      return;
    case K::SeparableCosine:
      put(t, p + "kind", "separable_cosine");
      put(t, p + "alpha", vec_text(d.alpha(), n));
      put(t, p + "phase", vec_text(d.phase(), n));
      put(t, p + "amplitude", num(d.amplitude()));
      return;
    case K::SmoothBump:
      put(t, p + "kind", "smooth_bump");
      put(t, p + "center", vec_text(d.center(), n));
      put(t, p + "radius", num(d.radius()));
      put(t, p + "amplitude", num(d.amplitude()));
      return;
  }
}

DataFunction read_data(const Reader& r, const std::string& s) {
  const std::string p = s + "/";
  const std::string kind = r.str(p + "kind");
  auto amp = [&] { return r.has(p + "amplitude") ? r.number(p + "amplitude") : 1.0; };
  if (kind == "zero") return DataFunction::zero();
  if (kind == "constant") return DataFunction::constant(r.number(p + "value"));
  if (kind == "affine") return DataFunction::affine(r.vec(p + "gradient"), r.number(p + "offset"));
  if (kind == "gaussian") return DataFunction::gaussian(r.vec(p + "center"), r.number(p + "width"), amp());
  if (kind == "modulated_gaussian")
    return DataFunction::modulated_gaussian(r.vec(p + "center"), r.number(p + "width"), r.vec(p + "carrier"), amp());
  if (kind == "plane_wave") return DataFunction::plane_wave(r.vec(p + "alpha"), amp());
  if (kind == "separable_cosine")
    return DataFunction::separable_cosine(r.vec(p + "alpha"), amp(), r.has(p + "phase") ? r.vec(p + "phase") : Vec{});
  if (kind == "smooth_bump") return DataFunction::smooth_bump(r.vec(p + "center"), r.number(p + "radius"), amp());
  throw Error(ErrorKind::Config, s + ": unknown data kind '" + kind + "'");
}

void write_domain(pt::ptree& t, const Domain& d, int n) {
  switch (d.shape()) {
    case Domain::Shape::Box:
      put(t, "domain/shape", "box");
      put(t, "domain/lo", vec_text(d.lo(), n));
      put(t, "domain/hi", vec_text(d.hi(), n));
      return;
    case Domain::Shape::Ball:
      put(t, "domain/shape", "ball");
      put(t, "domain/center", vec_text(d.center(), n));
      put(t, "domain/radius", num(d.radius()));
      return;
    case Domain::Shape::FullSpace:
      put(t, "domain/shape", "full_space");
      put(t, "domain/lo", vec_text(d.lo(), n));
      put(t, "domain/hi", vec_text(d.hi(), n));
      if (d.pad_cells()) put(t, "domain/pad", std::to_string(*d.pad_cells()));
      return;
    case Domain::Shape::Union:
      throw Error(ErrorKind::Config, "union domains cannot be serialized");
  }
}

Domain read_domain(const Reader& r, int n) {
  const std::string shape = r.str("domain/shape");
  if (shape == "box") return Domain::box(n, r.vec("domain/lo"), r.vec("domain/hi"));
  if (shape == "ball") return Domain::ball(n, r.vec("domain/center"), r.number("domain/radius"));
  if (shape == "full_space") {
    std::optional<int> pad;
    if (r.has("domain/pad")) pad = static_cast<int>(r.number("domain/pad"));
    return Domain::full_space(n, r.vec("domain/lo"), r.vec("domain/hi"), pad);
  }
  throw Error(ErrorKind::Config, "unknown domain shape '" + shape + "'");
}

void write_forcing(pt::ptree& t, const Forcing& w, int n) {
  switch (w.kind()) {
    case Forcing::Kind::None:
      put(t, "w/kind", "none");
      return;
    case Forcing::Kind::Separable:
      put(t, "w/kind", "separable");
      put(t, "w/profile", w.profile().kind == TimeProfile::Kind::Constant ? "constant" : "cosine");
      put(t, "w/omega", num(w.profile().omega));
      break;
    case Forcing::Kind::ManufacturedCosine:
      put(t, "w/kind", "manufactured_cosine");
      put(t, "w/omega", num(w.omega()));
      break;
  }
  write_data(t, "w_spatial", w.spatial(), n);
}

Forcing read_forcing(const Reader& r, int n) {
  const std::string kind = r.str("w/kind");
  if (kind == "none") return Forcing::none();
  const DataFunction spatial = read_data(r, "w_spatial");
  if (kind == "separable") {
    TimeProfile profile;
    const std::string pk = r.has("w/profile") ? r.str("w/profile") : "constant";
    if (pk == "cosine")
      profile = {TimeProfile::Kind::Cosine, r.number("w/omega")};
    else if (pk != "constant")
      throw Error(ErrorKind::Config, "unknown time profile '" + pk + "'");
    return Forcing::separable(spatial, profile, n);
  }
  if (kind == "manufactured_cosine") return Forcing::manufactured_cosine(spatial, r.number("w/omega"), n);
  throw Error(ErrorKind::Config, "unknown forcing kind '" + kind + "'");
}

void read_map(const pt::ptree& tree, const std::string& section, std::map<std::string, double>& out) {
  const auto child = tree.get_child_optional(pt::ptree::path_type(section, '/'));
  if (!child) return;
  for (const auto& [key, node] : *child) out[key] = parse_num(node.data(), section + "/" + key);
}

}  // namespace

double ExperimentConfig::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double ExperimentConfig::tolerance(const std::string& key, double fallback) const {
  const auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

std::string to_ini(const ExperimentConfig& c) {
  pt::ptree t;
  put(t, "experiment/id", c.id);
  put(t, "experiment/n", std::to_string(c.n));
  put(t, "experiment/levels", std::to_string(c.levels));
  put(t, "experiment/seed", std::to_string(c.seed));
  if (!c.ratios.empty()) put(t, "experiment/ratios", list_text(c.ratios));
  put(t, "lattice/dx", num(c.base.dx));
  put(t, "lattice/dt", num(c.base.dt));
  put(t, "lattice/T", num(c.base.T));
  write_domain(t, c.domain, c.n);
  write_data(t, "f", c.f, c.n);
  write_data(t, "g", c.g, c.n);
  write_data(t, "h", c.h, c.n);
  write_data(t, "b", c.b, c.n);
  write_data(t, "sigma", c.sigma, c.n);
  write_forcing(t, c.w, c.n);
  for (const auto& [k, v] : c.params) put(t, "params/" + k, num(v));
  for (const auto& [k, v] : c.tolerances) put(t, "tolerances/" + k, num(v));
  put(t, "output/dir", c.output_dir);
  std::ostringstream os;
  pt::write_ini(os, t);
  return os.str();
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig c) {
  pt::ptree t;
  std::istringstream is(text);
  try {
    pt::read_ini(is, t);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::Config, std::string("malformed config: ") + e.what());
  }
  const Reader r(t);
  if (r.has("experiment/id")) c.id = r.str("experiment/id");
  if (r.has("experiment/n")) c.n = static_cast<int>(r.number("experiment/n"));
  if (c.n < 1 || c.n > kMaxDim) throw Error(ErrorKind::Config, "n must be 1, 2 or 3");
  if (r.has("experiment/levels")) c.levels = static_cast<int>(r.number("experiment/levels"));
  if (r.has("experiment/seed")) c.seed = static_cast<unsigned>(r.number("experiment/seed"));
  if (r.has("experiment/ratios")) c.ratios = parse_list(r.str("experiment/ratios"), "experiment/ratios");
  c.base.n = c.n;
  if (r.has("lattice/dx")) c.base.dx = r.number("lattice/dx");
  if (r.has("lattice/dt")) c.base.dt = r.number("lattice/dt");
  if (r.has("lattice/T")) c.base.T = r.number("lattice/T");
  try {
    if (r.has_section("domain")) c.domain = read_domain(r, c.n);
    for (auto [name, slot] : {std::pair{"f", &c.f}, {"g", &c.g}, {"h", &c.h}, {"b", &c.b}, {"sigma", &c.sigma}})
      if (r.has_section(name)) *slot = read_data(r, name);
    if (r.has_section("w")) c.w = read_forcing(r, c.n);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    throw Error(ErrorKind::Config, e.what());
  }
  read_map(t, "params", c.params);
  read_map(t, "tolerances", c.tolerances);
  if (r.has("output/dir")) c.output_dir = r.str("output/dir");
  if (c.domain.dimension() != c.n) throw Error(ErrorKind::Config, "domain dimension differs from n");
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  const ExperimentConfig base;
  // the id and n decide the defaults
  pt::ptree t;
  std::istringstream is(text);
  try {
    pt::read_ini(is, t);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::Config, std::string("malformed config: ") + e.what());
  }
  const std::string id = t.get<std::string>("experiment.id", base.id);
  int n = base.n;
  if (const auto s = t.get_optional<std::string>("experiment.n")) n = static_cast<int>(parse_num(*s, "experiment/n"));
  if (n < 1 || n > kMaxDim) throw Error(ErrorKind::Config, "n must be 1, 2 or 3");
  return parse_config(text, default_config(id, n));
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot read config " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

ExperimentConfig default_config(const std::string& id, int n) {
  ExperimentConfig c;
  c.id = id;
  c.n = n;
  c.base.n = n;
  c.output_dir = "out/" + id;
  Vec lo{}, hi{}, zero{}, ones{}, half{};
  for (int k = 0; k < n; ++k) {
    lo[k] = -1.0;
    hi[k] = 1.0;
    ones[k] = 1.0;
    half[k] = 0.5;
  }
  c.domain = Domain::full_space(n, lo, hi);
  c.f = DataFunction::gaussian(zero, 0.5);
  Vec off{};
  off[0] = 0.25;
  c.g = DataFunction::gaussian(off, 0.5, 0.5);

  if (id == "E1" || id == "E2" || id == "solve") {
    c.base = {n, 0.2, 0.1, 1.0};
    c.levels = 5;
    c.ratios = n == 1 ? std::vector<double>{0.5, 1.0, 0.5, 0.3, 0.3} : std::vector<double>{0.5, 0.3, 1.0 / std::sqrt(2.0), 0.3, 0.3};
    c.tolerances = {{"order_min", 1.7}, {"order_max", 2.3}, {"ratio_factor", 4.0}};
  } else if (id == "E3") {
    c.base = {n, 0.1, 0.05, 1.0};
    c.levels = 9;
    c.params = {{"h0", 0.05}};
    c.tolerances = {{"ratio_lo", 3.2}, {"ratio_hi", 4.8}, {"floor", 1e-8}};
  } else if (id == "E4") {
    c.base = {n, 0.2, 0.1, 1.0};
    c.levels = 5;
    c.tolerances = {{"order_min", 1.7}, {"order_max", 2.3}};
  } else if (id == "E5") {
    c.domain = Domain::box(n, zero, ones);
    c.params = {{"cells", 64}, {"courant_factor", 1.05}, {"fixed_dt", 0.05}};
    c.base = {n, 1.0 / 64, 1.0 / 64 / std::sqrt(static_cast<double>(n)), 1.0};
    c.levels = 4;
    c.tolerances = {{"control_growth", 2.0}};
  } else if (id == "E6") {
    c.base = {n, 0.05, 0.025, 1.0};
    c.levels = 3;
    c.f = DataFunction::gaussian(zero, 0.6);
    c.g = DataFunction::zero();
    c.w = Forcing::manufactured_cosine(c.f, 1.0, n);
    c.params = {{"alpha", 2.0}, {"oracle_s_step", 0.01}};
    c.tolerances = {{"single_frequency", 1e-6}, {"manufactured_factor", 5.0}};
  } else if (id == "E7") {
    c.domain = Domain::box(n, zero, ones);
    c.base = {n, 0.1, 0.05, 1.0};
    c.levels = 5;
    // f = h keeps the shifted data zero on the boundary
    c.f = DataFunction::constant(0.3);
    c.g = DataFunction::smooth_bump(half, 0.4);
    c.h = DataFunction::constant(0.3);
    c.b = DataFunction::smooth_bump(half, 1.0, 0.1);
    c.sigma = DataFunction::smooth_bump(half, 1.0, 0.05);
    c.tolerances = {{"order_min", 1.0}, {"residual", 1e-9}, {"linear_exactness", 1e-12}};
  } else if (id == "E8") {
    c.params = {{"samples", 10000}, {"chain_samples", 100}};
    c.tolerances = {{"bound", 1e-12}, {"order_min", 1.9}};
  } else {
    throw Error(ErrorKind::Config, "unknown experiment '" + id + "'");
  }
  return c;
}

}  // namespace latwave
