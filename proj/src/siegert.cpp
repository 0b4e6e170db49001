#include "scatter1d/siegert.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>


#include "scatter1d/error.hpp"

namespace scatter1d {

namespace {

using boost::multiprecision::sqrt;

quad qabs(const cquad& z) { return sqrt(z.real() * z.real() + z.imag() * z.imag()); }

/// Principal square root.
cquad qsqrt(const cquad& z) {
  const quad r = qabs(z);
  if (r == 0) return cquad(0, 0);
  const quad re = sqrt(std::max(quad(0), (r + z.real()) / 2));
  quad im = sqrt(std::max(quad(0), (r - z.real()) / 2));
  if (z.imag() < 0) im = -im;
  return {re, im};
}

cquad to_q(cplx z) { return {quad(z.real()), quad(z.imag())}; }
cplx to_d(const cquad& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

quad vnorm(const CQuadVector& v) {
  quad s = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += v[i].real() * v[i].real() + v[i].imag() * v[i].imag();
  return sqrt(s);
}

/// Bilinear (unconjugated) u^T v
cquad bilinear(const CQuadVector& u, const CQuadVector& v) {
  cquad s(0, 0);
  for (Eigen::Index i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

CQuadVector matvec(const QuadMatrix& m, const CQuadVector& v) {
  CQuadVector r(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    cquad s(0, 0);
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

/// (A + lambda B + lambda^2) v
CQuadVector qep_apply(const QuadMatrix& a, const QuadMatrix& b, const cquad& lambda, const CQuadVector& v) {
  const CQuadVector av = matvec(a, v), bv = matvec(b, v);
  CQuadVector r(v.size());
  const cquad l2 = lambda * lambda;
  for (Eigen::Index i = 0; i < v.size(); ++i) r[i] = av[i] + lambda * bv[i] + l2 * v[i];
  return r;
}

quad max_abs(const CQuadMatrix& m) {
  quad r = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r = std::max(r, qabs(m(i, j)));
  return r;
}

/// sum_v x_v b_v(x) with double basis samples
cquad combine(const CQuadVector& coeffs, const std::vector<double>& b) {
  cquad s(0, 0);
  for (std::size_t v = 0; v < b.size(); ++v) s += coeffs[static_cast<Eigen::Index>(v)] * quad(b[v]);
  return s;
}

double qep_residual_double(const SiegertMatrices& m, cplx lambda, const CQuadVector& v) {
  const Eigen::Index n = v.size();
  Eigen::VectorXcd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = to_d(v[i]);
  const Eigen::VectorXcd r = m.A * x + lambda * (m.B * x) + lambda * lambda * x;
  return r.norm() / x.norm();
}

void check_energy(double energy) {
  if (!(energy > 0.0)) throw Error(ErrorKind::invalid_energy, "energy must be positive");
}

}  // namespace

SiegertSpectrum::SiegertSpectrum(BasisSet basis, PhysicsConstants constants, QuadMatrix a_matrix,
                                 QuadMatrix b_matrix, std::vector<SiegertState> states)
    : basis_(std::move(basis)), constants_(constants), a_(std::move(a_matrix)), b_(std::move(b_matrix)),
      states_(std::move(states)) {}

cplx SiegertSpectrum::k(std::size_t n) const { return cplx(0.0, -1.0) * lambda(n); }

cplx SiegertSpectrum::energy(std::size_t n) const {
  const cplx l = lambda(n);
  return -constants_.hbar * constants_.hbar * l * l / (2.0 * constants_.mass);
}

cplx SiegertSpectrum::phi(std::size_t n, double x) const {
  return to_d(combine(states_[n].c, basis_.values(x)));
}

SiegertSpectrum solve_qep(const SiegertMatrices& matrices, const BasisSet& basis,
                          const PhysicsConstants& constants, const QepOptions& options) {
  const Eigen::Index n = matrices.A.rows();
  if (n != basis.size() || matrices.A.cols() != n || matrices.B.rows() != n || matrices.B.cols() != n) {
    throw Error(ErrorKind::invalid_size, "A and B must be N x N with N the basis size");
  }
  const QuadMatrix a = matrices.A.cast<quad>();
  const QuadMatrix b = matrices.B.cast<quad>();
  QuadMatrix comp = QuadMatrix::Zero(2 * n, 2 * n);
  comp.block(0, n, n, n) = QuadMatrix::Identity(n, n);
  comp.block(n, 0, n, n) = -a;
  comp.block(n, n, n, n) = -b;

  Eigen::EigenSolver<QuadMatrix> solver(comp, true);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::eigensolve_failure, "companion eigensolve failed");
  const auto values = solver.eigenvalues();
  const auto vectors = solver.eigenvectors();

  std::vector<SiegertState> states(static_cast<std::size_t>(2 * n));
  std::vector<std::string> failures(states.size());
  std::vector<ErrorKind> failure_kinds(states.size(), ErrorKind::defective_pencil);
  const auto bp = basis.values(basis.a());
  const auto bm = basis.values(-basis.a());
#pragma omp parallel for schedule(dynamic, 1)
  for (Eigen::Index j = 0; j < 2 * n; ++j) {
    const auto slot = static_cast<std::size_t>(j);
    SiegertState& s = states[slot];
    s.lambda = values[j];
    const bool zero = qabs(s.lambda) < quad(options.lambda_zero_tol);
    if (zero && !options.allow_zero_modes) {
      failure_kinds[slot] = ErrorKind::zero_eigenvalue;
      failures[slot] = "|lambda| = " + std::to_string(static_cast<double>(qabs(s.lambda))) + " below tolerance";
      continue;
    }
    const CQuadVector raw = vectors.col(j);
    const CQuadVector c0 = raw.head(n);
    const CQuadVector lower = raw.tail(n);
    const quad ln = vnorm(lower);
    if (ln > 0) {
      CQuadVector diff(n);
      for (Eigen::Index i = 0; i < n; ++i) diff[i] = lower[i] - s.lambda * c0[i];
      s.consistency = static_cast<double>(vnorm(diff) / ln);
    }

    const CQuadVector bc = matvec(b, c0);
    const cquad nrm = quad(2) * s.lambda * bilinear(c0, c0) + bilinear(c0, bc);
    if (qabs(nrm) == 0) {
      failures[slot] = "self-orthogonal eigenvector";
      continue;
    }
    const cquad fd = qsqrt(cquad(2, 0) / nrm);
    const cquad sl = qsqrt(s.lambda);
    s.d.resize(n);
    s.c.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      s.d[i] = fd * c0[i];
      s.c[i] = sl * s.d[i];
    }
    s.phi_minus = combine(s.c, bm);
    s.phi_plus = combine(s.c, bp);
    s.phid_minus = combine(s.d, bm);
    s.phid_plus = combine(s.d, bp);

    // (A + lambda B + lambda^2) d, scale-free; double precision resolves the tolerance
    const double res = qep_residual_double(matrices, to_d(s.lambda), s.d);
    if (res > options.residual_tol) {
      failures[slot] = "eigenpair residual " + std::to_string(static_cast<double>(res)) + " above tolerance";
    }
  }
  for (std::size_t j = 0; j < failures.size(); ++j) {
    if (!failures[j].empty()) throw Error(failure_kinds[j], failures[j]);
  }

  std::sort(states.begin(), states.end(), [&](const SiegertState& x, const SiegertState& y) {
    const cquad ex = -x.lambda * x.lambda, ey = -y.lambda * y.lambda;
    if (ex.real() != ey.real()) return ex.real() < ey.real();
    return ex.imag() < ey.imag();
  });
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      if (qabs(states[i].lambda - states[j].lambda) < quad(options.degeneracy_tol)) {
        throw Error(ErrorKind::defective_pencil, "repeated eigenvalue at index " + std::to_string(i));
      }
    }
  }
  return SiegertSpectrum(basis, constants, a, b, std::move(states));
}

SiegertSpectrum siegert_spectrum(const Potential& potential, const PhysicsConstants& constants, BasisKind kind,
                                 double a, int size, double box_tolerance, const QepOptions& options) {
  const auto basis = build_basis(kind, a, size);
  const auto m = build_matrices(potential, constants, basis, box_tolerance);
  return solve_qep(m, basis, constants, options);
}

AlgebraReport algebra_report(const SiegertSpectrum& spectrum) {
  const auto& st = spectrum.states();
  const QuadMatrix& a = spectrum.A();
  const QuadMatrix& b = spectrum.B();
  const Eigen::Index n = a.rows();
  AlgebraReport r;

  quad qep = 0;
  std::vector<CQuadVector> bc;
  std::vector<quad> qres(st.size());
  bc.resize(st.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < st.size(); ++i) {
    qres[i] = vnorm(qep_apply(a, b, st[i].lambda, st[i].d)) / vnorm(st[i].d);
    bc[i] = matvec(b, st[i].c);
  }
  for (std::size_t i = 0; i < st.size(); ++i) {
    qep = std::max(qep, qres[i]);
    r.consistency = std::max(r.consistency, st[i].consistency);
  }
  r.qep_residual = static_cast<double>(qep);

  std::vector<quad> row_res(st.size(), quad(0));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < st.size(); ++i) {
    for (std::size_t j = 0; j < st.size(); ++j) {
      cquad v = (st[i].lambda + st[j].lambda) * bilinear(st[i].c, st[j].c) + bilinear(st[i].c, bc[j]);
      if (i == j) v -= quad(2) * st[i].lambda;
      row_res[i] = std::max(row_res[i], qabs(v));
    }
  }
  r.normalization_residual = static_cast<double>(*std::max_element(row_res.begin(), row_res.end()));

  CQuadMatrix s_inv = CQuadMatrix::Zero(n, n), s_id = CQuadMatrix::Zero(n, n), s_b = CQuadMatrix::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 1)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const auto& s : st) {
      const cquad l = s.lambda;
      const cquad ld = l * s.d[i];
      const cquad lld = l * ld;
      for (Eigen::Index j = 0; j < n; ++j) {
        s_inv(i, j) += s.d[i] * s.d[j];
        s_id(i, j) += ld * s.d[j];
        s_b(i, j) += lld * s.d[j];
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    s_id(i, i) -= quad(2);
    for (Eigen::Index j = 0; j < n; ++j) s_b(i, j) += quad(2) * b(i, j);
  }
  r.closure_inverse = static_cast<double>(max_abs(s_inv));
  r.closure_identity = static_cast<double>(max_abs(s_id));
  r.closure_b = static_cast<double>(max_abs(s_b));

  quad conj = 0;
  for (const auto& s : st) {
    quad best = -1;
    const cquad target(s.lambda.real(), -s.lambda.imag());
    for (const auto& t : st) {
      const quad d = qabs(t.lambda - target);
      if (best < 0 || d < best) best = d;
    }
    conj = std::max(conj, best);
  }
  r.conjugation = static_cast<double>(conj);
  return r;
}

double m_inverse_residual(const SiegertSpectrum& spectrum, cplx lambda) {
  const QuadMatrix& a = spectrum.A();
  const QuadMatrix& b = spectrum.B();
  const Eigen::Index n = a.rows();
  const cquad l = to_q(lambda);
  std::vector<cquad> f;
  for (const auto& s : spectrum.states()) f.push_back(cquad(1, 0) / (quad(2) * (l - s.lambda)));
  // c c^T / (2 lambda_n (lambda - lambda_n)) = d d^T / (2 (lambda - lambda_n))
  CQuadMatrix inv = CQuadMatrix::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 1)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < f.size(); ++k) {
      const auto& d = spectrum.states()[k].d;
      const cquad fd = f[k] * d[i];
      for (Eigen::Index j = 0; j < n; ++j) inv(i, j) += fd * d[j];
    }
  }
  CQuadMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cquad(a(i, j), 0) + l * b(i, j) + (i == j ? l * l : cquad(0, 0));
  CQuadMatrix prod = CQuadMatrix::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 1)
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) {
      const cquad mik = m(i, k);
      for (Eigen::Index j = 0; j < n; ++j) prod(i, j) += mik * inv(k, j);
    }
  for (Eigen::Index i = 0; i < n; ++i) prod(i, i) -= quad(1);
  return static_cast<double>(max_abs(prod));
}

namespace {

/// sum_n phi_n(x) phi_n(y) / (k_n (k - k_n)) = sum_n i phi_d(x) phi_d(y) / (k - k_n)
cquad pole_sum(const SiegertSpectrum& spectrum, double energy,
               const std::function<cquad(const SiegertState&)>& product) {
  const double k = spectrum.constants().wavenumber(energy);
  const cquad kq(quad(k), 0);
  cquad sum(0, 0);
  for (const auto& s : spectrum.states()) {
    const cquad kn(s.lambda.imag(), -s.lambda.real());  // -i lambda
    const cquad diff = kq - kn;
    if (qabs(diff) < quad(1e-12)) {
      throw Error(ErrorKind::pole_proximity, "k lies within 1e-12 of a Siegert pole");
    }
    sum += cquad(0, 1) * product(s) / diff;
  }
  return sum;
}

}  // namespace

cplx siegert_green(const SiegertSpectrum& spectrum, double energy, double x, double y) {
  check_energy(energy);
  const double a = spectrum.basis().a();
  const double lim = a * (1.0 + 1e-12);
  if (std::abs(x) > lim || std::abs(y) > lim) throw Error(ErrorKind::out_of_box, "|x| or |y| exceeds a");
  const auto bx = spectrum.basis().values(x);
  const auto by = spectrum.basis().values(y);
  const cquad sum = pole_sum(spectrum, energy, [&](const SiegertState& s) {
    return combine(s.d, bx) * combine(s.d, by);
  });
  const auto& pc = spectrum.constants();
  return pc.mass / (pc.hbar * pc.hbar) * to_d(sum);
}

cplx siegert_transmission(const SiegertSpectrum& spectrum, double energy) {
  check_energy(energy);
  const double a = spectrum.basis().a();
  const double k = spectrum.constants().wavenumber(energy);
  const cquad sum = pole_sum(spectrum, energy, [](const SiegertState& s) { return s.phid_minus * s.phid_plus; });
  const cquad pref = to_q(cplx(0.0, k) * std::exp(cplx(0.0, -2.0 * k * a)));
  return to_d(pref * sum);
}

cplx siegert_endpoint_closed_form(const SiegertSpectrum& spectrum, double energy, cplx transmission) {
  const auto& pc = spectrum.constants();
  const double k = pc.wavenumber(energy);
  const double a = spectrum.basis().a();
  return cplx(0.0, -1.0) * pc.mass / (pc.hbar * pc.hbar * k) * transmission * std::exp(cplx(0.0, 2.0 * k * a));
}

const char* to_string(StateClass c) noexcept {
  switch (c) {
    case StateClass::bound: return "bound";
    case StateClass::antibound: return "antibound";
    case StateClass::resonance: return "resonance";
    case StateClass::other: return "other";
  }
  return "other";
}

Classification classify_spectrum(const SiegertSpectrum& spectrum, const ClassifyOptions& options) {
  Classification out;
  const std::size_t n = spectrum.size();
  out.classes.assign(n, StateClass::other);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx k = spectrum.k(i);
    const double tol = options.axis_scale * (1.0 + std::abs(k));
    if (std::abs(k.real()) <= tol) {
      if (k.imag() > 0.0) {
        out.classes[i] = StateClass::bound;
        out.bound.push_back(i);
      } else if (k.imag() < 0.0) {
        out.classes[i] = StateClass::antibound;
        out.antibound.push_back(i);
      } else {
        out.other.push_back(i);
      }
    } else if (k.real() > tol && k.imag() < 0.0) {
      out.classes[i] = StateClass::resonance;
      std::size_t mirror = static_cast<std::size_t>(-1);
      const cplx target = -std::conj(k);
      double best = options.mirror_tol * (1.0 + std::abs(k));
      for (std::size_t j = 0; j < n; ++j) {
        const double d = std::abs(spectrum.k(j) - target);
        if (j != i && d <= best) {
          best = d;
          mirror = j;
        }
      }
      out.resonances.emplace_back(i, mirror);
    } else {
      out.other.push_back(i);
    }
  }
  return out;
}

double ResonanceRecord::lorentzian(double energy) const {
  const double h = 0.5 * gamma;
  return q * h * h / ((energy - e_res) * (energy - e_res) + h * h);
}

cplx boundary_product(const SiegertSpectrum& spectrum, std::size_t index) {
  const auto& s = spectrum.states().at(index);
  return to_d(s.lambda * s.phid_minus * s.phid_plus);
}

double breit_wigner_q(cplx energy, cplx k, cplx phi_product, const PhysicsConstants& constants) {
  const double gamma = -2.0 * energy.imag();
  const cplx v = constants.hbar * constants.hbar * k / constants.mass * (2.0 / gamma) * phi_product;
  return std::norm(v);
}

double breit_wigner_q(const SiegertSpectrum& spectrum, std::size_t index) {
  return breit_wigner_q(spectrum.energy(index), spectrum.k(index), boundary_product(spectrum, index),
                        spectrum.constants());
}

ResonanceRecord breit_wigner_from_values(cplx energy, cplx k, cplx phi_product, const PhysicsConstants& constants,
                                         std::span<const ScanPoint> fd_curve, std::size_t min_window_points) {
  if (!(k.real() > 0.0 && k.imag() < 0.0)) {
    throw Error(ErrorKind::invalid_argument, "selected state is not a resonance");
  }
  ResonanceRecord r;
  r.k = k;
  r.e_res = energy.real();
  r.gamma = -2.0 * energy.imag();
  r.q = breit_wigner_q(energy, k, phi_product, constants);
  if (fd_curve.empty() || fd_curve.front().energy > r.e_res - 5.0 * r.gamma ||
      fd_curve.back().energy < r.e_res + 5.0 * r.gamma) {
    throw Error(ErrorKind::window_uncovered, "FD curve does not cover E_res +- 5 Gamma");
  }
  double ss = 0.0;
  for (const auto& p : fd_curve) {
    if (std::abs(p.energy - r.e_res) > 2.0 * r.gamma) continue;
    const double d = r.lorentzian(p.energy) - p.t2();
    ss += d * d;
    ++r.window_points;
  }
  if (r.window_points < min_window_points) {
    throw Error(ErrorKind::window_uncovered, "only " + std::to_string(r.window_points) +
                                                  " FD points inside E_res +- 2 Gamma");
  }
  r.fit_rms = std::sqrt(ss / static_cast<double>(r.window_points));
  return r;
}

ResonanceRecord breit_wigner_report(const SiegertSpectrum& spectrum, std::span<const ScanPoint> fd_curve,
                                    std::size_t index, std::size_t min_window_points) {
  if (index >= spectrum.size()) throw Error(ErrorKind::invalid_argument, "state index out of range");
  auto r = breit_wigner_from_values(spectrum.energy(index), spectrum.k(index), boundary_product(spectrum, index),
                                    spectrum.constants(), fd_curve, min_window_points);
  r.index = index;
  return r;
}

}  // namespace scatter1d
