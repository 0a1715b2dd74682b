#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "latwave/grid_field.hpp"
#include "latwave/types.hpp"

namespace latwave {

struct ErrorRow {
  int level = 1;  // 1-based
  double dx = 0.0;
  double dt = 0.0;
  double sup_error = 0.0;
  double l2_error = 0.0;
  std::optional<double> observed_order;  // log2(sup_{k-1}/sup_k), from level 2 on
};

class ErrorTable {
 public:
  ErrorTable() = default;
  explicit ErrorTable(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  const std::vector<ErrorRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  std::size_t size() const { return rows_.size(); }
  const ErrorRow& back() const { return rows_.back(); }

  /// Appends the next level; the order is derived from the previous sup error.
  void add(double dx, double dt, double sup_error, double l2_error);
  /// Appends a row as given (used when reading files).
  void add_row(const ErrorRow& row) { rows_.push_back(row); }

  bool sup_monotone_decreasing() const;

 private:
  std::string name_;
  std::vector<ErrorRow> rows_;
};

std::optional<double> observed_order(double coarse_error, double fine_error);

/// Header "level,dx,dt,sup_error,l2_error,observed_order", 17 significant
/// digits, an empty last field when there is no order.
std::string to_csv(const ErrorTable& table);
ErrorTable parse_csv(const std::string& text, std::string name = {});
void write_csv(const ErrorTable& table, const std::string& path);
ErrorTable read_csv(const std::string& path);

/// gnuplot script drawing sup and L2 errors against dx on log axes.
std::string plot_script(const ErrorTable& table, const std::string& csv_name);
void write_plot_script(const ErrorTable& table, const std::string& csv_name, const std::string& path);

/// Values at space-time lattice points (k dx, p dt) of one lattice.
class SpaceTimeSamples {
 public:
  SpaceTimeSamples(int n, double dx, double dt) : n_(n), dx_(dx), dt_(dt) {}

  int dimension() const { return n_; }
  double dx() const { return dx_; }
  double dt() const { return dt_; }
  std::size_t size() const { return values_.size(); }

  void set(const MultiIndex& k, int p, double value) { values_[{k, p}] = value; }
  std::optional<double> get(const MultiIndex& k, int p) const;
  /// Records level p of `field` at every support point inside [lo, hi].
  void record(const GridField& field, int p, const Vec& lo, const Vec& hi);

  using Key = std::pair<MultiIndex, int>;
  const std::map<Key, double>& values() const { return values_; }

 private:
  int n_;
  double dx_;
  double dt_;
  std::map<Key, double> values_;
};

struct NormPair {
  double sup = 0.0;
  double l2 = 0.0;
  std::size_t count = 0;
};

/// sup and (sum e^2 dx^n dt)^{1/2} over the points both sample sets share
/// inside [lo, hi] x [t_lo, t_hi]; dx and dt are the coarser of the two.
/// Throws no-common-points if there are none.
NormPair compare_on_common_lattice(const SpaceTimeSamples& a, const SpaceTimeSamples& b, const Vec& lo, const Vec& hi,
                                   double t_lo, double t_hi);

}  // namespace latwave
