#include "latwave/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "latwave/error.hpp"

namespace latwave {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

constexpr const char* kHeader = "level,dx,dt,sup_error,l2_error,observed_order";

}  // namespace

std::optional<double> observed_order(double coarse_error, double fine_error) {
  if (!(coarse_error > 0.0) || !(fine_error > 0.0)) return std::nullopt;
  return std::log2(coarse_error / fine_error);
}

void ErrorTable::add(double dx, double dt, double sup_error, double l2_error) {
  ErrorRow row{static_cast<int>(rows_.size()) + 1, dx, dt, sup_error, l2_error, std::nullopt};
  if (!rows_.empty()) row.observed_order = observed_order(rows_.back().sup_error, sup_error);
  rows_.push_back(row);
}

bool ErrorTable::sup_monotone_decreasing() const {
  for (std::size_t k = 1; k < rows_.size(); ++k)
    if (!(rows_[k].sup_error < rows_[k - 1].sup_error)) return false;
  return true;
}

std::string to_csv(const ErrorTable& table) {
  std::string s = std::string(kHeader) + "\n";
  for (const auto& r : table.rows()) {
    s += std::to_string(r.level) + "," + num(r.dx) + "," + num(r.dt) + "," + num(r.sup_error) + "," +
         num(r.l2_error) + "," + (r.observed_order ? num(*r.observed_order) : "") + "\n";
  }
  return s;
}

ErrorTable parse_csv(const std::string& text, std::string name) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw Error(ErrorKind::Io, "error table header mismatch");
  ErrorTable table(std::move(name));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() == 5) f.emplace_back();
    if (f.size() != 6) throw Error(ErrorKind::Io, "bad error table row: " + line);
    ErrorRow r;
    r.level = std::stoi(f[0]);
    r.dx = std::strtod(f[1].c_str(), nullptr);
    r.dt = std::strtod(f[2].c_str(), nullptr);
    r.sup_error = std::strtod(f[3].c_str(), nullptr);
    r.l2_error = std::strtod(f[4].c_str(), nullptr);
    if (!f[5].empty()) r.observed_order = std::strtod(f[5].c_str(), nullptr);
    table.add_row(r);
  }
  return table;
}

void write_csv(const ErrorTable& table, const std::string& path) { write_text(to_csv(table), path); }

ErrorTable read_csv(const std::string& path) { return parse_csv(read_text(path), path); }

std::string plot_script(const ErrorTable& table, const std::string& csv_name) {
  std::ostringstream os;
  os << "# " << (table.name().empty() ? "error table" : table.name()) << "\n"
     << "set datafile separator ','\n"
     << "set logscale xy\n"
     << "set key top left\n"
     << "set xlabel 'dx'\n"
     << "set ylabel 'error'\n"
     << "set grid\n"
     << "set terminal pngcairo size 800,600\n"
     << "set output '" << csv_name << ".png'\n"
     << "plot '" << csv_name << "' every ::1 using 2:4 with linespoints title 'sup', \\\n"
     << "     '' every ::1 using 2:5 with linespoints title 'L2'\n";
  return os.str();
}

void write_plot_script(const ErrorTable& table, const std::string& csv_name, const std::string& path) {
  write_text(plot_script(table, csv_name), path);
}

std::optional<double> SpaceTimeSamples::get(const MultiIndex& k, int p) const {
  const auto it = values_.find({k, p});
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void SpaceTimeSamples::record(const GridField& field, int p, const Vec& lo, const Vec& hi) {
  const auto& c = field.classification();
  const auto v = field.level(p);
  for (std::size_t i : c.support()) {
    const Vec x = c.position(i);
    bool inside = true;
    for (int k = 0; k < n_; ++k) inside = inside && x[k] >= lo[k] - 1e-12 && x[k] <= hi[k] + 1e-12;
    if (inside) set(c.box.multi_index(i), p, v[i]);
  }
}

NormPair compare_on_common_lattice(const SpaceTimeSamples& a, const SpaceTimeSamples& b, const Vec& lo, const Vec& hi,
                                   double t_lo, double t_hi) {
  require(a.dimension() == b.dimension(), ErrorKind::InvalidArgument, "sample dimensions differ");
  const int n = a.dimension();
  const double rx = a.dx() / b.dx();
  const double rt = a.dt() / b.dt();
  NormPair out;
  double sum = 0.0;
  for (const auto& [key, va] : a.values()) {
    const auto& [k, p] = key;
    const double t = p * a.dt();
    if (t < t_lo - 1e-12 || t > t_hi + 1e-12) continue;
    MultiIndex kb{};
    bool on_b = true, inside = true;
    for (int d = 0; d < n; ++d) {
      const double x = k[d] * a.dx();
      inside = inside && x >= lo[d] - 1e-12 && x <= hi[d] + 1e-12;
      const double q = k[d] * rx;
      kb[d] = static_cast<int>(std::llround(q));
      on_b = on_b && std::abs(q - kb[d]) < 1e-9 * std::max(1.0, std::abs(q));
    }
    const double qt = p * rt;
    const int pb = static_cast<int>(std::llround(qt));
    on_b = on_b && std::abs(qt - pb) < 1e-9 * std::max(1.0, std::abs(qt));
    if (!inside || !on_b) continue;
    const auto vb = b.get(kb, pb);
    if (!vb) continue;
    const double e = std::abs(va - *vb);
    out.sup = std::max(out.sup, e);
    sum += e * e;
    ++out.count;
  }
  if (out.count == 0) throw Error(ErrorKind::NoCommonPoints, "sample sets share no points in the window");
  const double dx = std::max(a.dx(), b.dx());
  const double dt = std::max(a.dt(), b.dt());
  out.l2 = std::sqrt(sum * std::pow(dx, n) * dt);
  return out;
}

}  // namespace latwave
