#include "bishopdisc/disc_function.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace bishopdisc {

namespace {

Eigen::FFT<double>& fft() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

Eigen::VectorXcd forward(const Eigen::VectorXcd& x) {
  Eigen::VectorXcd out;
  fft().fwd(out, x);
  return out / static_cast<double>(x.size());
}

Eigen::VectorXcd inverse(const Eigen::VectorXcd& c) {
  Eigen::VectorXcd out;
  fft().inv(out, c);
  return out * static_cast<double>(c.size());
}

int mode_of(int column, int n) { return column < n / 2 ? column : column - n; }

}  // namespace

BoundarySignal::BoundarySignal(Eigen::VectorXcd samples) : samples_(std::move(samples)) {}

BoundarySignal BoundarySignal::from_real(const Eigen::VectorXd& samples) {
  return BoundarySignal(samples.cast<cplx>());
}

BoundarySignal BoundarySignal::from_function(int n_theta, const std::function<cplx(double)>& f) {
  Eigen::VectorXcd s(n_theta);
  for (int j = 0; j < n_theta; ++j) s[j] = f(2.0 * std::numbers::pi * j / n_theta);
  return BoundarySignal(s);
}

BoundarySignal BoundarySignal::from_coefficients(const Eigen::VectorXcd& coeffs) {
  return BoundarySignal(inverse(coeffs));
}

Eigen::VectorXcd BoundarySignal::coefficients() const { return forward(samples_); }

cplx BoundarySignal::coefficient(int mode) const {
  const int n = size();
  if (mode < -n / 2 || mode >= n / 2) return 0.0;
  return coefficients()[mode >= 0 ? mode : mode + n];
}

double BoundarySignal::imaginary_fraction() const {
  const double s = sup();
  if (s == 0.0) return 0.0;
  return samples_.imag().cwiseAbs().maxCoeff() / s;
}

DiscFunction::DiscFunction(GridPtr grid)
    : grid_(std::move(grid)), values_(Eigen::MatrixXcd::Zero(grid_->n_rings(), grid_->n_theta())) {}

DiscFunction::DiscFunction(GridPtr grid, Eigen::MatrixXcd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.rows() != grid_->n_rings() || values_.cols() != grid_->n_theta())
    throw Error("disc function values do not match the grid shape");
}

DiscFunction DiscFunction::from_function(GridPtr grid, const std::function<cplx(cplx)>& f) {
  DiscFunction out(grid);
  for (int i = 0; i < grid->n_rings(); ++i)
    for (int j = 0; j < grid->n_theta(); ++j) out.values_(i, j) = f(grid->node(i, j));
  return out;
}

DiscFunction DiscFunction::constant(GridPtr grid, cplx c) {
  DiscFunction out(grid);
  out.values_.setConstant(c);
  return out;
}

DiscFunction DiscFunction::from_modes(GridPtr grid, const Eigen::MatrixXcd& modes) {
  DiscFunction out(grid);
  for (int i = 0; i < grid->n_rings(); ++i)
    out.values_.row(i) = inverse(modes.row(i).transpose()).transpose();
  return out;
}

Eigen::MatrixXcd DiscFunction::modes() const {
  Eigen::MatrixXcd m(values_.rows(), values_.cols());
  for (Eigen::Index i = 0; i < values_.rows(); ++i)
    m.row(i) = forward(values_.row(i).transpose()).transpose();
  return m;
}

BoundarySignal DiscFunction::boundary() const {
  return BoundarySignal(values_.row(grid_->boundary_ring()).transpose());
}

cplx DiscFunction::eval(cplx zeta) const {
  const double r = std::abs(zeta);
  if (r > 1.0 + 1e-12) throw Error("evaluation point outside the closed unit disc");
  const double th = std::arg(zeta);
  const Eigen::RowVectorXcd radial = grid_->interpolation_row(std::min(r, 1.0)).cast<cplx>() * modes();
  const int n = grid_->n_theta();
  cplx acc = 0.0;
  for (int c = 0; c < n; ++c) {
    const int k = mode_of(c, n);
    if (k == -n / 2)
      acc += radial[c] * std::cos(0.5 * n * th);
    else
      acc += radial[c] * std::polar(1.0, k * th);
  }
  return acc;
}

cplx DiscFunction::center() const {
  return (grid_->interpolation_row(0.0).cast<cplx>() * modes().col(0))(0, 0);
}

std::pair<cplx, cplx> DiscFunction::center_derivatives() const {
  const Eigen::MatrixXcd m = modes();
  const Eigen::RowVectorXcd d1 = grid_->derivative_row(0.0, 1).cast<cplx>();
  return {(d1 * m.col(grid_->column(1)))(0, 0), (d1 * m.col(grid_->column(-1)))(0, 0)};
}

cplx DiscFunction::center_laplacian() const {
  const Eigen::RowVectorXcd d2 = grid_->derivative_row(0.0, 2).cast<cplx>();
  return 2.0 * (d2 * modes().col(0))(0, 0);
}

double DiscFunction::sup() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

double DiscFunction::boundary_sup() const {
  return values_.row(grid_->boundary_ring()).cwiseAbs().maxCoeff();
}

DiscFunction DiscFunction::conj() const { return DiscFunction(grid_, values_.conjugate()); }

DiscFunction DiscFunction::real() const {
  return DiscFunction(grid_, values_.real().cast<cplx>());
}

void DiscFunction::check_same_grid(const DiscFunction& o) const {
  if (grid_ != o.grid_ &&
      (grid_->n_theta() != o.grid_->n_theta() || grid_->n_r() != o.grid_->n_r()))
    throw Error("disc functions live on different grids");
}

DiscFunction DiscFunction::operator+(const DiscFunction& o) const {
  check_same_grid(o);
  return DiscFunction(grid_, values_ + o.values_);
}

DiscFunction DiscFunction::operator-(const DiscFunction& o) const {
  check_same_grid(o);
  return DiscFunction(grid_, values_ - o.values_);
}

DiscFunction DiscFunction::operator*(cplx a) const { return DiscFunction(grid_, values_ * a); }

DiscFunction& DiscFunction::operator+=(const DiscFunction& o) {
  check_same_grid(o);
  values_ += o.values_;
  return *this;
}

DiscFunction& DiscFunction::operator-=(const DiscFunction& o) {
  check_same_grid(o);
  values_ -= o.values_;
  return *this;
}

DiscFunction DiscFunction::times(const DiscFunction& o) const {
  check_same_grid(o);
  return DiscFunction(grid_, values_.cwiseProduct(o.values_));
}

cplx HolomorphicDisc::eval(cplx zeta) const {
  cplx acc = 0.0;
  for (Eigen::Index k = taylor_.size() - 1; k >= 0; --k) acc = acc * zeta + taylor_[k];
  return acc;
}

DiscFunction HolomorphicDisc::on_grid(GridPtr grid) const {
  DiscFunction out(grid);
  for (int i = 0; i < grid->n_rings(); ++i)
    for (int j = 0; j < grid->n_theta(); ++j) out.values()(i, j) = eval(grid->node(i, j));
  return out;
}

BoundarySignal HolomorphicDisc::boundary(int n_theta) const {
  return BoundarySignal::from_function(n_theta, [this](double t) { return eval(std::polar(1.0, t)); });
}

Disc Disc::zeros(GridPtr grid, int n) {
  std::vector<DiscFunction> c;
  for (int k = 0; k < n; ++k) c.emplace_back(grid);
  return Disc(std::move(c));
}

CVec Disc::point(int ring, int j) const {
  CVec p(dim());
  for (int k = 0; k < dim(); ++k) p[k] = components[k](ring, j);
  return p;
}

CVec Disc::eval(cplx zeta) const {
  CVec p(dim());
  for (int k = 0; k < dim(); ++k) p[k] = components[k].eval(zeta);
  return p;
}

CVec Disc::center() const {
  CVec p(dim());
  for (int k = 0; k < dim(); ++k) p[k] = components[k].center();
  return p;
}

double Disc::sup() const {
  double s = 0.0;
  for (const auto& c : components) s = std::max(s, c.sup());
  return s;
}

double Disc::distance(const Disc& o) const {
  if (o.dim() != dim()) throw Error("discs of different dimension");
  double s = 0.0;
  for (int k = 0; k < dim(); ++k) s = std::max(s, (components[k] - o.components[k]).sup());
  return s;
}

Disc Disc::operator+(const Disc& o) const {
  Disc out = *this;
  for (int k = 0; k < dim(); ++k) out.components[k] += o.components[k];
  return out;
}

Disc Disc::operator-(const Disc& o) const {
  Disc out = *this;
  for (int k = 0; k < dim(); ++k) out.components[k] -= o.components[k];
  return out;
}

}  // namespace bishopdisc
