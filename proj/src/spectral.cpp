#include "fdkp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fdkp/error.hpp"
#include "fft_engine.hpp"

namespace fdkp {

namespace detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

}  // namespace

FftPlanPair::FftPlanPair(int nx, int ny) : nx_(nx), ny_(ny) {
  std::vector<double> real(real_size());
  std::vector<std::complex<double>> spec(complex_size());
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (ny == 1) {
    forward_ = fftw_plan_dft_r2c_1d(nx, real.data(), c, flags);
    backward_ = fftw_plan_dft_c2r_1d(nx, c, real.data(), flags);
  } else {
    forward_ = fftw_plan_dft_r2c_2d(ny, nx, real.data(), c, flags);
    backward_ = fftw_plan_dft_c2r_2d(ny, nx, c, real.data(), flags);
  }
  if (forward_ == nullptr || backward_ == nullptr) {
    throw std::runtime_error("FFTW planning failed");
  }
}

FftPlanPair::~FftPlanPair() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (forward_ != nullptr) fftw_destroy_plan(forward_);
  if (backward_ != nullptr) fftw_destroy_plan(backward_);
}

std::size_t FftPlanPair::real_size() const {
  return static_cast<std::size_t>(nx_) * ny_;
}

std::size_t FftPlanPair::complex_size() const {
  return static_cast<std::size_t>(nx_ / 2 + 1) * ny_;
}

void FftPlanPair::forward(const double* in, std::complex<double>* out) const {
  // r2c does not write to its input.
  fftw_execute_dft_r2c(forward_, const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void FftPlanPair::backward(std::complex<double>* in, double* out) const {
  fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(in), out);
}

FftEngine::FftEngine(int nx, int ny) : base_(nx, ny), padded_(2 * nx, ny == 1 ? 1 : 2 * ny) {}

}  // namespace detail

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> fft_wavenumbers(int n, double length) {
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / length;
  for (int i = 0; i < n; ++i) {
    const int m = i <= n / 2 ? i : i - n;
    k[i] = base * m;
  }
  return k;
}

// Parseval weight of half-complex column i: interior columns stand for a
// conjugate pair.
double column_weight(const Grid& grid, int i) {
  return (i == 0 || grid.is_nyquist_x(i)) ? 1.0 : 2.0;
}

}  // namespace

Grid::Grid(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  if (nx < 4 || !is_power_of_two(nx)) {
    throw Error(ErrorCode::InvalidArgument, "Nx must be a power of two >= 4, got " + std::to_string(nx));
  }
  if (ny != 1 && (ny < 4 || !is_power_of_two(ny))) {
    throw Error(ErrorCode::InvalidArgument,
                "Ny must be 1 or a power of two >= 4, got " + std::to_string(ny));
  }
  if (!(lx > 0.0) || !(ly > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "domain lengths must be positive");
  }
  kx_ = fft_wavenumbers(nx, lx);
  ky_ = ny == 1 ? std::vector<double>{0.0} : fft_wavenumbers(ny, ly);
  engine_ = std::make_shared<const detail::FftEngine>(nx, ny);
}

bool Grid::same_shape(const Grid& other) const {
  return nx_ == other.nx_ && ny_ == other.ny_ && lx_ == other.lx_ && ly_ == other.ly_;
}

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(Grid grid)
    : grid_(std::move(grid)), values_(grid_.size(), 0.0), coeffs_(grid_.spectral_size()) {}

SpectralField SpectralField::from_values(Grid grid, std::vector<double> values) {
  if (values.size() != grid.size()) {
    throw Error(ErrorCode::InvalidArgument, "sample count does not match grid");
  }
  SpectralField field(std::move(grid));
  field.values_ = std::move(values);
  field.coeffs_valid_ = false;
  return field;
}

SpectralField SpectralField::from_coeffs(Grid grid, std::vector<Complex> coeffs) {
  if (coeffs.size() != grid.spectral_size()) {
    throw Error(ErrorCode::InvalidArgument, "coefficient count does not match grid");
  }
  SpectralField field(std::move(grid));
  field.coeffs_ = std::move(coeffs);
  field.values_valid_ = false;
  return field;
}

SpectralField SpectralField::sample(Grid grid, const std::function<double(double, double)>& f) {
  std::vector<double> values(grid.size());
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      values[static_cast<std::size_t>(j) * grid.nx() + i] = f(grid.x(i), grid.y(j));
    }
  }
  return from_values(std::move(grid), std::move(values));
}

const std::vector<double>& SpectralField::values() const {
  if (!values_valid_) throw std::logic_error("physical representation is not valid");
  return values_;
}

const std::vector<Complex>& SpectralField::coeffs() const {
  if (!coeffs_valid_) throw std::logic_error("spectral representation is not valid");
  return coeffs_;
}

std::vector<double>& SpectralField::mutable_values() {
  ensure_values();
  coeffs_valid_ = false;
  return values_;
}

std::vector<Complex>& SpectralField::mutable_coeffs() {
  ensure_coeffs();
  values_valid_ = false;
  return coeffs_;
}

SpectralField& SpectralField::ensure_coeffs() {
  if (!coeffs_valid_) {
    const auto& plans = grid_.engine().base();
    plans.forward(values_.data(), coeffs_.data());
    const double scale = 1.0 / static_cast<double>(grid_.size());
    for (auto& c : coeffs_) c *= scale;
    coeffs_valid_ = true;
  }
  return *this;
}

SpectralField& SpectralField::ensure_values() {
  if (!values_valid_) {
    std::vector<Complex> scratch = coeffs_;
    grid_.engine().base().backward(scratch.data(), values_.data());
    values_valid_ = true;
  }
  return *this;
}

SpectralField transform_forward(SpectralField field) {
  field.ensure_coeffs();
  return field;
}

SpectralField transform_inverse(SpectralField field) {
  field.ensure_values();
  return field;
}

// ---------------------------------------------------------------------------
// Multipliers

Multiplier::Multiplier(const Grid& grid, const Symbol& symbol)
    : values_(grid.spectral_size()) {
  for (int j = 0; j < grid.ny(); ++j) {
    const double l = grid.ky(j);
    const bool nyq_y = grid.is_nyquist_y(j);
    for (int i = 0; i < grid.nkx(); ++i) {
      const double k = grid.kx(i);
      const bool nyq_x = grid.is_nyquist_x(i);
      Complex value = symbol(k, l);
      if (nyq_x && nyq_y) {
        value = 0.25 * (value + symbol(-k, l) + symbol(k, -l) + symbol(-k, -l));
      } else if (nyq_x) {
        value = 0.5 * (value + symbol(-k, l));
      } else if (nyq_y) {
        value = 0.5 * (value + symbol(k, -l));
      }
      if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        std::ostringstream msg;
        msg << "symbol is not finite at (k, l) = (" << k << ", " << l << ")";
        throw Error(ErrorCode::NonFiniteSymbol, msg.str());
      }
      values_[grid.spectral_index(i, j)] = value;
    }
  }
}

Multiplier Multiplier::real(const Grid& grid, const std::function<double(double, double)>& symbol) {
  return Multiplier(grid, [&](double k, double l) { return Complex(symbol(k, l), 0.0); });
}

void Multiplier::apply(std::span<Complex> coeffs) const {
  for (std::size_t n = 0; n < coeffs.size(); ++n) coeffs[n] *= values_[n];
}

Multiplier& Multiplier::operator*=(const Multiplier& other) {
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] *= other.values_[n];
  return *this;
}

SpectralField apply_multiplier(SpectralField field, const Symbol& symbol) {
  const Multiplier multiplier(field.grid(), symbol);
  return apply_multiplier(std::move(field), multiplier);
}

SpectralField apply_multiplier(SpectralField field, const Multiplier& multiplier) {
  multiplier.apply(field.mutable_coeffs());
  return field;
}

// ---------------------------------------------------------------------------
// Dealiasing

Dealiaser::Dealiaser(const Grid& grid)
    : grid_(grid),
      pnx_(2 * grid.nx()),
      pny_(grid.is_1d() ? 1 : 2 * grid.ny()),
      padded_coeffs_(grid.engine().padded().complex_size()),
      padded_samples_(grid.engine().padded().real_size()) {}

void Dealiaser::to_padded(std::span<const Complex> coeffs, std::span<double> samples) {
  std::fill(padded_coeffs_.begin(), padded_coeffs_.end(), Complex{});
  const int nx = grid_.nx();
  const int ny = grid_.ny();
  const int pnkx = pnx_ / 2 + 1;
  for (int j = 0; j < ny; ++j) {
    if (grid_.is_nyquist_y(j)) continue;
    const int pj = (grid_.is_1d() || j < ny / 2) ? j : j + (pny_ - ny);
    const Complex* src = coeffs.data() + grid_.spectral_index(0, j);
    Complex* dst = padded_coeffs_.data() + static_cast<std::size_t>(pj) * pnkx;
    std::copy(src, src + nx / 2, dst);
  }
  grid_.engine().padded().backward(padded_coeffs_.data(), samples.data());
}

void Dealiaser::from_padded(std::span<const double> samples, std::span<Complex> coeffs) {
  grid_.engine().padded().forward(samples.data(), padded_coeffs_.data());
  const int nx = grid_.nx();
  const int ny = grid_.ny();
  const int pnkx = pnx_ / 2 + 1;
  const double scale = 1.0 / (static_cast<double>(pnx_) * pny_);
  for (int j = 0; j < ny; ++j) {
    Complex* dst = coeffs.data() + grid_.spectral_index(0, j);
    if (grid_.is_nyquist_y(j)) {
      std::fill(dst, dst + grid_.nkx(), Complex{});
      continue;
    }
    const int pj = (grid_.is_1d() || j < ny / 2) ? j : j + (pny_ - ny);
    const Complex* src = padded_coeffs_.data() + static_cast<std::size_t>(pj) * pnkx;
    for (int i = 0; i < nx / 2; ++i) dst[i] = src[i] * scale;
    dst[nx / 2] = Complex{};
  }
}

void Dealiaser::cube(std::span<const Complex> coeffs, std::span<Complex> out) {
  to_padded(coeffs, padded_samples_);
  for (double& v : padded_samples_) v = v * v * v;
  from_padded(padded_samples_, out);
}

SpectralField cubic_dealias(SpectralField field) {
  field.ensure_coeffs();
  Dealiaser dealiaser(field.grid());
  std::vector<Complex> out(field.grid().spectral_size());
  dealiaser.cube(field.coeffs(), out);
  return SpectralField::from_coeffs(field.grid(), std::move(out));
}

// ---------------------------------------------------------------------------
// Projections and quadrature

SpectralField zero_mass_project(SpectralField field) {
  auto& coeffs = field.mutable_coeffs();
  const Grid& grid = field.grid();
  for (int j = 0; j < grid.ny(); ++j) coeffs[grid.spectral_index(0, j)] = Complex{};
  return field;
}

double x_mean_norm(const SpectralField& field) {
  const Grid& grid = field.grid();
  const auto& coeffs = field.coeffs();
  double sum = 0.0;
  for (int j = 0; j < grid.ny(); ++j) sum += std::norm(coeffs[grid.spectral_index(0, j)]);
  return std::sqrt(grid.area() * sum);
}

Complex inverse_dx_symbol(double k, double /*l*/) {
  if (k == 0.0) return Complex{};
  return Complex(0.0, -1.0 / k);
}

double integral(const SpectralField& field) {
  return field.grid().area() * field.coeffs()[0].real();
}

double inner_product(const SpectralField& a, const SpectralField& b) {
  const Grid& grid = a.grid();
  const auto& ca = a.coeffs();
  const auto& cb = b.coeffs();
  double sum = 0.0;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nkx(); ++i) {
      const std::size_t n = grid.spectral_index(i, j);
      sum += column_weight(grid, i) * (std::conj(ca[n]) * cb[n]).real();
    }
  }
  return grid.area() * sum;
}

double weighted_energy(const SpectralField& field, std::span<const double> weight) {
  const Grid& grid = field.grid();
  const auto& c = field.coeffs();
  double sum = 0.0;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nkx(); ++i) {
      const std::size_t n = grid.spectral_index(i, j);
      sum += column_weight(grid, i) * weight[n] * std::norm(c[n]);
    }
  }
  return grid.area() * sum;
}

double max_abs(const SpectralField& field) {
  double m = 0.0;
  for (double v : field.values()) m = std::max(m, std::abs(v));
  return m;
}

double spectral_tail(const SpectralField& field, double cutoff_fraction) {
  const Grid& grid = field.grid();
  const auto& c = field.coeffs();
  const double kmax = std::abs(grid.kx(grid.nx() / 2));
  const double lmax = grid.is_1d() ? 0.0 : std::abs(grid.ky(grid.ny() / 2));
  double tail = 0.0;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nkx(); ++i) {
      const bool high_k = std::abs(grid.kx(i)) > cutoff_fraction * kmax;
      const bool high_l = !grid.is_1d() && std::abs(grid.ky(j)) > cutoff_fraction * lmax;
      if (high_k || high_l) tail = std::max(tail, std::abs(c[grid.spectral_index(i, j)]));
    }
  }
  return tail;
}

}  // namespace fdkp
