#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace fdkp {

using Complex = std::complex<double>;

namespace detail {
class FftEngine;
}

/// Periodic grid on [0, Lx) x [0, Ly) with Nx x Ny samples.
///
/// Layout conventions (fixed so that snapshot files are portable):
///  - real samples are row-major with y as the slow index: value(i, j) is at
///    j * Nx + i, sampled at x_i = i Lx / Nx, y_j = j Ly / Ny;
///  - spectral coefficients use the half-complex layout of an r2c transform:
///    coefficient (i, j) for kx index i in [0, Nx/2] and ky index j in
///    [0, Ny) is at j * (Nx/2 + 1) + i;
///  - wavenumbers follow FFT ordering, 2 pi / L times
///    0, 1, ..., N/2, -N/2 + 1, ..., -1 (the Nyquist entry is +N/2);
///  - coefficients are normalized so that u(x) = sum u_hat e^{i(kx + ly)},
///    hence a constant field c has u_hat(0, 0) = c.
///
/// Ny = 1 selects a 1D grid (ky = {0}). Plans are immutable once the grid
/// is constructed; copies share them.
class Grid {
 public:
  Grid(int nx, int ny, double lx, double ly);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  bool is_1d() const { return ny_ == 1; }

  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  int nkx() const { return nx_ / 2 + 1; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(nkx()) * ny_; }
  std::size_t spectral_index(int i, int j) const {
    return static_cast<std::size_t>(j) * nkx() + i;
  }

  double kx(int i) const { return kx_[i]; }
  double ky(int j) const { return ky_[j]; }
  std::span<const double> kx_values() const { return kx_; }
  std::span<const double> ky_values() const { return ky_; }

  double x(int i) const { return lx_ * i / nx_; }
  double y(int j) const { return ly_ * j / ny_; }
  double dx() const { return lx_ / nx_; }
  double area() const { return is_1d() ? lx_ : lx_ * ly_; }

  bool is_nyquist_x(int i) const { return i == nx_ / 2; }
  bool is_nyquist_y(int j) const { return ny_ > 1 && j == ny_ / 2; }

  const detail::FftEngine& engine() const { return *engine_; }

  bool same_shape(const Grid& other) const;

 private:
  int nx_;
  int ny_;
  double lx_;
  double ly_;
  std::vector<double> kx_;
  std::vector<double> ky_;
  std::shared_ptr<const detail::FftEngine> engine_;
};

/// A real periodic field carried in physical and/or spectral form.
/// Mutable accessors invalidate the other representation.
class SpectralField {
 public:
  explicit SpectralField(Grid grid);

  static SpectralField from_values(Grid grid, std::vector<double> values);
  static SpectralField from_coeffs(Grid grid, std::vector<Complex> coeffs);
  static SpectralField sample(Grid grid, const std::function<double(double, double)>& f);

  const Grid& grid() const { return grid_; }
  bool has_values() const { return values_valid_; }
  bool has_coeffs() const { return coeffs_valid_; }

  /// Throws std::logic_error when the representation is not valid.
  const std::vector<double>& values() const;
  const std::vector<Complex>& coeffs() const;

  std::vector<double>& mutable_values();
  std::vector<Complex>& mutable_coeffs();

  Complex coeff(int i, int j) const { return coeffs()[grid_.spectral_index(i, j)]; }
  double value(int i, int j) const { return values()[static_cast<std::size_t>(j) * grid_.nx() + i]; }

  SpectralField& ensure_coeffs();
  SpectralField& ensure_values();

 private:
  Grid grid_;
  std::vector<double> values_;
  std::vector<Complex> coeffs_;
  bool values_valid_ = true;
  bool coeffs_valid_ = true;
};

SpectralField transform_forward(SpectralField field);
SpectralField transform_inverse(SpectralField field);

using Symbol = std::function<Complex(double k, double l)>;

/// A symbol tabulated on the half-complex modes of a grid.
///
/// At a Nyquist wavenumber the modes +k_N and -k_N coincide, so the symbol
/// is averaged over the aliased pair (and likewise in l). Symbols with
/// s(-k, -l) = conj(s(k, l)) then keep real fields real; odd symbols such
/// as ik vanish on the Nyquist column.
class Multiplier {
 public:
  Multiplier(const Grid& grid, const Symbol& symbol);
  static Multiplier real(const Grid& grid, const std::function<double(double, double)>& symbol);

  std::span<const Complex> values() const { return values_; }
  Complex operator[](std::size_t index) const { return values_[index]; }

  void apply(std::span<Complex> coeffs) const;
  Multiplier& operator*=(const Multiplier& other);

 private:
  explicit Multiplier(std::vector<Complex> values) : values_(std::move(values)) {}
  std::vector<Complex> values_;
};

/// Throws NonFiniteSymbol when the symbol is not finite on the grid.
SpectralField apply_multiplier(SpectralField field, const Symbol& symbol);
SpectralField apply_multiplier(SpectralField field, const Multiplier& multiplier);

/// Exact evaluation of cubic (and, for integrals, quartic) products: fields
/// are zero-padded by 2 in every resolved direction, multiplied pointwise,
/// transformed back and truncated. Nyquist modes are dropped on input and
/// zero on output. Owns its scratch; use one per worker.
class Dealiaser {
 public:
  explicit Dealiaser(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::size_t padded_size() const { return padded_samples_.size(); }
  int padded_nx() const { return pnx_; }
  int padded_ny() const { return pny_; }

  void to_padded(std::span<const Complex> coeffs, std::span<double> samples);
  void from_padded(std::span<const double> samples, std::span<Complex> coeffs);

  /// Coefficients of v^3.
  void cube(std::span<const Complex> coeffs, std::span<Complex> out);

 private:
  Grid grid_;
  int pnx_;
  int pny_;
  std::vector<Complex> padded_coeffs_;
  std::vector<double> padded_samples_;
};

SpectralField cubic_dealias(SpectralField field);

/// Sets every coefficient with kx = 0 to zero.
SpectralField zero_mass_project(SpectralField field);

/// L2 norm (over the domain) of the kx = 0 content, i.e. of the x-mean
/// profile. This is what zero_mass_project removes.
double x_mean_norm(const SpectralField& field);

/// 1 / (ik) on kx != 0, 0 on kx = 0.
Complex inverse_dx_symbol(double k, double l);

/// Domain integral of the field.
double integral(const SpectralField& field);

/// Domain integral of a * b via Parseval.
double inner_product(const SpectralField& a, const SpectralField& b);

/// Domain integral of conj(v_hat) * w * v_hat summed over all modes, for a
/// real, even tabulated weight w (e.g. a quadratic energy density).
double weighted_energy(const SpectralField& field, std::span<const double> weight);

double max_abs(const SpectralField& field);

/// Largest |coefficient| among modes with |kx| > cutoff_fraction * kx_max
/// or |ky| > cutoff_fraction * ky_max.
double spectral_tail(const SpectralField& field, double cutoff_fraction);

}  // namespace fdkp
