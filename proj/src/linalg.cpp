#include "kreinkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "kreinkit/error.hpp"

namespace kreinkit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const ComplexMatrix& m, const char* op) {
  if (!m.square()) {
    throw DimensionError(std::string(op) + ": matrix not square (" +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ")");
  }
}

void require_finite(const ComplexMatrix& m, const char* op) {
  if (!m.all_finite()) {
    throw NumericalError(std::string(op) + ": non-finite entries in operand");
  }
}

void require_spectrum_dim(const ComplexMatrix& m, const char* op) {
  if (m.rows() > defaults::kMaxSpectrumDim) {
    throw DimensionError(std::string(op) + ": dimension " +
                         std::to_string(m.rows()) + " exceeds the kernel cap " +
                         std::to_string(defaults::kMaxSpectrumDim));
  }
}

/// One Jacobi rotation parameter set for the pivot (b - a)/(2|g|).
struct JacobiRotation {
  double c = 1.0;
  double s = 0.0;
};

JacobiRotation jacobi_angles(double a, double b, double absg) {
  const double tau = (b - a) / (2.0 * absg);
  const double t =
      (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  JacobiRotation r;
  r.c = 1.0 / std::sqrt(1.0 + t * t);
  r.s = t * r.c;
  return r;
}

/// Canonical eigenvector phases: the largest-modulus component of every
/// column is made real positive (lowest index wins ties), so repeated runs
/// and permuted inputs produce identical bases.
void canonicalize_columns(ComplexMatrix& v) {
  for (std::size_t j = 0; j < v.cols(); ++j) {
    std::size_t kmax = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < v.rows(); ++k) {
      const double m = std::abs(v(k, j));
      if (m > best + 1e-15 * best) {
        best = m;
        kmax = k;
      }
    }
    if (best <= 0.0) continue;
    const Complex u = v(kmax, j) / best;
    const Complex w = std::conj(u);
    for (std::size_t k = 0; k < v.rows(); ++k) v(k, j) *= w;
  }
}

double offdiag_norm(const ComplexMatrix& h) {
  double s = 0.0;
  for (std::size_t p = 0; p < h.rows(); ++p)
    for (std::size_t q = 0; q < h.cols(); ++q)
      if (p != q) s += std::norm(h(p, q));
  return std::sqrt(s);
}

}  // namespace

HermitianEigenSystem hermitian_eig(const ComplexMatrix& m) {
  require_square(m, "hermitian_eig");
  require_finite(m, "hermitian_eig");
  const double scale = std::max(1.0, m.frobenius_norm());
  const double herm_res = m.square() ? hermitian_residual(m) : 0.0;
  if (herm_res > 1e-9 * scale) {
    std::ostringstream os;
    os << "hermitian_eig: input not Hermitian (residual " << herm_res
       << " exceeds " << 1e-9 * scale << ")";
    throw HypothesisError("hermitian-input", os.str());
  }

  const std::size_t n = m.rows();
  HermitianEigenSystem out;
  out.eigenvectors = ComplexMatrix::identity(n);
  if (n == 0) return out;

  ComplexMatrix h = hermitian_part(m);
  ComplexMatrix& v = out.eigenvectors;
  const double frob = std::max(h.frobenius_norm(), 1e-300);
  const double stop = 1e-14 * frob;
  const double skip = 1e-18 * frob;

  bool converged = false;
  for (int sweep = 0; sweep < 60; ++sweep) {
    if (offdiag_norm(h) <= stop) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex g = h(p, q);
        const double absg = std::abs(g);
        if (absg <= skip) continue;
        const Complex u = g / absg;  // e^{i phi}
        const Complex uc = std::conj(u);
        const double a = h(p, p).real();
        const double b = h(q, q).real();
        const auto [c, s] = jacobi_angles(a, b, absg);
        const double t = s / c;

        // Rows p, q: left multiply by the rotation's adjoint.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex hpk = h(p, k);
          const Complex hqk = h(q, k);
          h(p, k) = c * hpk - s * u * hqk;
          h(q, k) = s * uc * hpk + c * hqk;
        }
        // Columns p, q: right multiply by the rotation.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex hkp = h(k, p);
          const Complex hkq = h(k, q);
          h(k, p) = c * hkp - s * uc * hkq;
          h(k, q) = s * u * hkp + c * hkq;
        }
        // The (p,q) plane is now diagonal up to roundoff; pin it exactly.
        h(p, q) = 0.0;
        h(q, p) = 0.0;
        h(p, p) = Complex(a - t * absg, 0.0);
        h(q, q) = Complex(b + t * absg, 0.0);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s * uc * vkq;
          v(k, q) = s * u * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged && offdiag_norm(h) > stop) {
    throw NumericalError("hermitian_eig: Jacobi sweeps failed to converge");
  }

  out.eigenvalues.resize(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = h(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });

  ComplexMatrix vs(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = diag[order[j]];
    for (std::size_t i = 0; i < n; ++i) vs(i, j) = v(i, order[j]);
  }
  canonicalize_columns(vs);
  out.eigenvectors = vs;
  return out;
}

const char* to_string(Definiteness d) noexcept {
  switch (d) {
    case Definiteness::positive: return "positive";
    case Definiteness::negative: return "negative";
    case Definiteness::zero: return "zero";
    case Definiteness::indefinite: return "indefinite";
  }
  return "indefinite";
}

PsdVerdict psd_verdict(const ComplexMatrix& m, double tol_rel,
                       double herm_tol_abs) {
  require_square(m, "psd_verdict");
  require_finite(m, "psd_verdict");
  if (herm_tol_abs < 0.0) {
    herm_tol_abs = 1e-9 * std::max(1.0, m.frobenius_norm());
  }
  const double res = hermitian_residual(m);
  if (res > herm_tol_abs) {
    std::ostringstream os;
    os << "psd_verdict: input not Hermitian (residual " << res << " exceeds "
       << herm_tol_abs << ")";
    throw HypothesisError("hermitian-input", os.str());
  }

  PsdVerdict out;
  if (m.rows() == 0) {
    out.verdict = Definiteness::zero;
    out.tolerance_used = tol_rel;
    return out;
  }
  const auto eig = hermitian_eig(hermitian_part(m));
  out.min_eigenvalue = eig.eigenvalues.front();
  out.max_eigenvalue = eig.eigenvalues.back();
  const double snorm =
      std::max(std::abs(out.min_eigenvalue), std::abs(out.max_eigenvalue));
  out.tolerance_used = tol_rel * std::max(1.0, snorm);
  const bool nonneg = out.min_eigenvalue >= -out.tolerance_used;
  const bool nonpos = out.max_eigenvalue <= out.tolerance_used;
  if (nonneg && nonpos) out.verdict = Definiteness::zero;
  else if (nonneg) out.verdict = Definiteness::positive;
  else if (nonpos) out.verdict = Definiteness::negative;
  else out.verdict = Definiteness::indefinite;
  return out;
}

PsdFactor psd_factor(const ComplexMatrix& m, double rank_rel, double tol_rel) {
  const PsdVerdict verdict = psd_verdict(m, tol_rel);
  if (!verdict.positive_semidefinite()) {
    std::ostringstream os;
    os << "psd_factor: operand is " << to_string(verdict.verdict)
       << " (min eigenvalue " << verdict.min_eigenvalue
       << "); refusing to clamp";
    throw HypothesisError("psd-input", os.str());
  }
  const std::size_t n = m.rows();
  const auto eig = hermitian_eig(hermitian_part(m));
  const double lmax = n == 0 ? 0.0 : eig.eigenvalues.back();
  const double cutoff = rank_rel * std::max(lmax, 0.0);

  std::vector<std::size_t> keep;  // descending eigenvalue order
  for (std::size_t i = n; i-- > 0;) {
    if (eig.eigenvalues[i] > cutoff && eig.eigenvalues[i] > 0.0) keep.push_back(i);
  }
  PsdFactor out;
  out.rank = keep.size();
  out.factor = ComplexMatrix(n, out.rank);
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const double w = std::sqrt(eig.eigenvalues[keep[j]]);
    for (std::size_t i = 0; i < n; ++i)
      out.factor(i, j) = w * eig.eigenvectors(i, keep[j]);
  }

  const double rec =
      (out.factor * out.factor.adjoint() - hermitian_part(m)).frobenius_norm();
  if (rec > 1e-9 * std::max(1.0, m.frobenius_norm())) {
    throw NumericalError("psd_factor: reconstruction residual " +
                         std::to_string(rec) + " exceeds bound");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Singular value decomposition: one-sided Jacobi on columns.
// ---------------------------------------------------------------------------

Svd svd(const ComplexMatrix& a) {
  require_finite(a, "svd");
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) {
    // Work on the adjoint and swap the factors back.
    Svd t = svd(a.adjoint());
    return Svd{std::move(t.v), std::move(t.sigma), std::move(t.u)};
  }

  Svd out;
  out.u = ComplexMatrix(m, n);
  out.v = ComplexMatrix::identity(n);
  out.sigma.assign(n, 0.0);
  if (n == 0) return out;

  ComplexMatrix w = a;
  ComplexMatrix& v = out.v;

  bool converged = false;
  for (int sweep = 0; sweep < 60 && !converged; ++sweep) {
    converged = true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double alpha = 0.0, beta = 0.0;
        Complex gamma(0.0, 0.0);
        for (std::size_t k = 0; k < m; ++k) {
          alpha += std::norm(w(k, i));
          beta += std::norm(w(k, j));
          gamma += std::conj(w(k, i)) * w(k, j);
        }
        const double absg = std::abs(gamma);
        if (absg <= 1e-15 * std::sqrt(alpha * beta) || absg == 0.0) continue;
        converged = false;
        const Complex phase = std::conj(gamma / absg);
        const auto [c, s] = jacobi_angles(alpha, beta, absg);
        for (std::size_t k = 0; k < m; ++k) {
          const Complex wi = w(k, i);
          const Complex wj = w(k, j) * phase;
          w(k, i) = c * wi - s * wj;
          w(k, j) = s * wi + c * wj;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vi = v(k, i);
          const Complex vj = v(k, j) * phase;
          v(k, i) = c * vi - s * vj;
          v(k, j) = s * vi + c * vj;
        }
      }
    }
  }
  if (!converged) {
    throw NumericalError("svd: Jacobi sweeps failed to converge");
  }

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s2 = 0.0;
    for (std::size_t k = 0; k < m; ++k) s2 += std::norm(w(k, j));
    norms[j] = std::sqrt(s2);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return norms[x] > norms[y];
  });

  ComplexMatrix vs(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.sigma[j] = norms[src];
    for (std::size_t k = 0; k < n; ++k) vs(k, j) = v(k, src);
    if (norms[src] > 0.0) {
      for (std::size_t k = 0; k < m; ++k) out.u(k, j) = w(k, src) / norms[src];
    }
    // A zero singular value leaves its U column zero; pinv ignores it.
  }
  out.v = vs;
  return out;
}

double spectral_norm(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  return svd(a).sigma.front();
}

SingularExtent singular_extent(const ComplexMatrix& a) {
  SingularExtent out;
  if (a.rows() == 0 || a.cols() == 0) return out;
  const auto s = svd(a);
  out.sigma_max = s.sigma.front();
  out.sigma_min = s.sigma.back();
  return out;
}

bool is_invertible(const ComplexMatrix& a, double tol) {
  if (!a.square() || a.empty()) return a.square() && a.rows() == 0;
  const auto ext = singular_extent(a);
  return ext.sigma_max > 0.0 && ext.sigma_min >= tol * ext.sigma_max;
}

// ---------------------------------------------------------------------------
// LU solve with partial pivoting.
// ---------------------------------------------------------------------------

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "solve");
  require_finite(a, "solve");
  require_finite(b, "solve");
  if (a.rows() != b.rows()) {
    throw DimensionError("solve: right-hand side has " +
                         std::to_string(b.rows()) + " rows, expected " +
                         std::to_string(a.rows()));
  }
  const std::size_t n = a.rows(), nrhs = b.cols();
  if (n == 0) return ComplexMatrix(0, nrhs);

  ComplexMatrix lu = a;
  std::vector<std::size_t> piv(n);
  std::iota(piv.begin(), piv.end(), std::size_t{0});
  const double scale = std::max(a.max_abs(), 1e-300);

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = k;
    double pm = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = std::abs(lu(i, k));
      if (m > pm) {
        pm = m;
        pr = i;
      }
    }
    if (pm <= kEps * static_cast<double>(n) * scale) {
      std::ostringstream os;
      os << "solve: matrix numerically singular (pivot " << pm
         << " at column " << k << ", scale " << scale << ")";
      throw NumericalError(os.str());
    }
    if (pr != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pr, j));
      std::swap(piv[k], piv[pr]);
    }
    const Complex inv_piv = 1.0 / lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = lu(i, k) * inv_piv;
      lu(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
    }
  }

  ComplexMatrix x(n, nrhs);
  for (std::size_t col = 0; col < nrhs; ++col) {
    // Forward substitution on the permuted right-hand side.
    std::vector<Complex> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = b(piv[i], col);
      for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * y[j];
      y[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      Complex s = y[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x(j, col);
      x(i, col) = s / lu(i, i);
    }
  }
  return x;
}

ComplexMatrix inverse(const ComplexMatrix& a) {
  return solve(a, ComplexMatrix::identity(a.rows()));
}

ComplexMatrix pinv(const ComplexMatrix& a, double rank_rel) {
  if (a.rows() == 0 || a.cols() == 0) return ComplexMatrix(a.cols(), a.rows());
  const auto s = svd(a);
  const double cutoff = rank_rel * s.sigma.front();
  const std::size_t k = s.sigma.size();
  ComplexMatrix x(a.cols(), a.rows());
  for (std::size_t t = 0; t < k; ++t) {
    if (s.sigma[t] <= cutoff || s.sigma[t] <= 0.0) break;  // descending order
    const double w = 1.0 / s.sigma[t];
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const Complex vi = s.v(i, t) * w;
      for (std::size_t j = 0; j < a.rows(); ++j) {
        x(i, j) += vi * std::conj(s.u(j, t));
      }
    }
  }
  return x;
}

// ---------------------------------------------------------------------------
// Complex Schur form: Householder Hessenberg + shifted QR with global
// similarity updates.  Dimensions are capped, so robustness wins over the
// O(n^3)-per-step cost of materializing each step's unitary.
// ---------------------------------------------------------------------------

namespace {

struct Hessenberg {
  ComplexMatrix h;
  ComplexMatrix q;  // A = Q H Q*
};

Hessenberg hessenberg(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  Hessenberg out{a, ComplexMatrix::identity(n)};
  if (n < 3) return out;
  ComplexMatrix& h = out.h;
  ComplexMatrix& q = out.q;

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    std::vector<Complex> v(len);
    double xnorm2 = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      v[i] = h(k + 1 + i, k);
      xnorm2 += std::norm(v[i]);
    }
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm <= 1e-300) continue;
    const Complex x0 = v[0];
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    const Complex alpha = -phase * xnorm;
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (const auto& vi : v) vnorm2 += std::norm(vi);
    if (vnorm2 <= 1e-300) continue;
    const double betaf = 2.0 / vnorm2;

    // Left: rows k+1..n-1 over all columns.
    for (std::size_t j = 0; j < n; ++j) {
      Complex s(0.0, 0.0);
      for (std::size_t i = 0; i < len; ++i) s += std::conj(v[i]) * h(k + 1 + i, j);
      s *= betaf;
      for (std::size_t i = 0; i < len; ++i) h(k + 1 + i, j) -= s * v[i];
    }
    // Right: columns k+1..n-1 over all rows.
    for (std::size_t i = 0; i < n; ++i) {
      Complex s(0.0, 0.0);
      for (std::size_t j = 0; j < len; ++j) s += h(i, k + 1 + j) * v[j];
      s *= betaf;
      for (std::size_t j = 0; j < len; ++j) h(i, k + 1 + j) -= s * std::conj(v[j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      Complex s(0.0, 0.0);
      for (std::size_t j = 0; j < len; ++j) s += q(i, k + 1 + j) * v[j];
      s *= betaf;
      for (std::size_t j = 0; j < len; ++j) q(i, k + 1 + j) -= s * std::conj(v[j]);
    }
    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
  return out;
}

/// Eigenvalue of [[a,b],[c,d]] closest to d (Wilkinson shift).
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex tr2 = 0.5 * (a + d);
  const Complex disc = std::sqrt((0.5 * (a - d)) * (0.5 * (a - d)) + b * c);
  const Complex e1 = tr2 + disc;
  const Complex e2 = tr2 - disc;
  return std::abs(e1 - d) < std::abs(e2 - d) ? e1 : e2;
}

}  // namespace

SchurDecomposition schur(const ComplexMatrix& a) {
  require_square(a, "schur");
  require_finite(a, "schur");
  require_spectrum_dim(a, "schur");
  const std::size_t n = a.rows();
  Hessenberg hq = hessenberg(a);
  ComplexMatrix& h = hq.h;
  ComplexMatrix& q = hq.q;
  if (n < 2) return SchurDecomposition{q, h};

  const double frob0 = std::max(h.frobenius_norm(), 1e-300);
  std::size_t total_iters = 0;
  const std::size_t budget = 60 * n;
  std::size_t stuck = 0;
  std::size_t last_hi = n;  // sentinel

  while (true) {
    // Kill negligible subdiagonals.
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double thresh =
          kEps * std::max(std::abs(h(i, i)) + std::abs(h(i + 1, i + 1)), frob0);
      if (std::abs(h(i + 1, i)) <= thresh) h(i + 1, i) = 0.0;
    }
    std::size_t hi = n - 1;
    while (hi > 0 && h(hi, hi - 1) == Complex(0.0, 0.0)) --hi;
    if (hi == 0) break;
    std::size_t lo = hi;
    while (lo > 0 && h(lo, lo - 1) != Complex(0.0, 0.0)) --lo;

    if (hi == last_hi) ++stuck;
    else { stuck = 0; last_hi = hi; }
    if (++total_iters > budget) {
      throw NumericalError("schur: QR iteration exceeded its budget");
    }

    Complex mu;
    if (stuck > 0 && stuck % 12 == 11) {
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));  // exceptional shift
    } else {
      mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1),
                           h(hi, hi));
    }

    // Explicit QR step on the active block as one global unitary similarity:
    // W (H - mu I)|block = R  =>  H <- W H W*, Q <- Q W*.
    const std::size_t bn = hi - lo + 1;
    ComplexMatrix r(bn, bn);
    for (std::size_t i = 0; i < bn; ++i)
      for (std::size_t j = 0; j < bn; ++j) r(i, j) = h(lo + i, lo + j);
    for (std::size_t i = 0; i < bn; ++i) r(i, i) -= mu;

    ComplexMatrix wmat = ComplexMatrix::identity(bn);
    for (std::size_t i = 0; i + 1 < bn; ++i) {
      const Complex x = r(i, i);
      const Complex y = r(i + 1, i);
      const double ax = std::abs(x), ay = std::abs(y);
      double c;
      Complex s;
      if (ay == 0.0) {
        c = 1.0;
        s = 0.0;
      } else if (ax == 0.0) {
        c = 0.0;
        s = 1.0;
      } else {
        const double t = std::hypot(ax, ay);
        c = ax / t;
        s = (x / ax) * std::conj(y) / t;
      }
      for (std::size_t j = 0; j < bn; ++j) {
        const Complex ri = r(i, j), rj = r(i + 1, j);
        r(i, j) = c * ri + s * rj;
        r(i + 1, j) = -std::conj(s) * ri + c * rj;
        const Complex wi = wmat(i, j), wj = wmat(i + 1, j);
        wmat(i, j) = c * wi + s * wj;
        wmat(i + 1, j) = -std::conj(s) * wi + c * wj;
      }
    }

    // H <- W_full H W_full*, applied on the affected strips only.
    // Rows lo..hi: H' = W H on columns lo..n-1.
    ComplexMatrix strip(bn, n - lo);
    for (std::size_t i = 0; i < bn; ++i)
      for (std::size_t j = 0; j < n - lo; ++j) strip(i, j) = h(lo + i, lo + j);
    ComplexMatrix wstrip(bn, n - lo);
    for (std::size_t i = 0; i < bn; ++i)
      for (std::size_t j = 0; j < n - lo; ++j) {
        Complex sacc(0.0, 0.0);
        for (std::size_t k = 0; k < bn; ++k) sacc += wmat(i, k) * strip(k, j);
        wstrip(i, j) = sacc;
      }
    for (std::size_t i = 0; i < bn; ++i)
      for (std::size_t j = 0; j < n - lo; ++j) h(lo + i, lo + j) = wstrip(i, j);

    // Columns lo..hi: H' = H W* on rows 0..hi.
    const std::size_t nrows = hi + 1;
    ComplexMatrix cstrip(nrows, bn);
    for (std::size_t i = 0; i < nrows; ++i)
      for (std::size_t j = 0; j < bn; ++j) cstrip(i, j) = h(i, lo + j);
    for (std::size_t i = 0; i < nrows; ++i)
      for (std::size_t j = 0; j < bn; ++j) {
        Complex sacc(0.0, 0.0);
        for (std::size_t k = 0; k < bn; ++k)
          sacc += cstrip(i, k) * std::conj(wmat(j, k));
        h(i, lo + j) = sacc;
      }

    // Q <- Q W*.
    ComplexMatrix qstrip(n, bn);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < bn; ++j) qstrip(i, j) = q(i, lo + j);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < bn; ++j) {
        Complex sacc(0.0, 0.0);
        for (std::size_t k = 0; k < bn; ++k)
          sacc += qstrip(i, k) * std::conj(wmat(j, k));
        q(i, lo + j) = sacc;
      }
  }

  // Pin the triangular shape.
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) h(i + 1, j) = 0.0;
  return SchurDecomposition{q, h};
}

std::vector<Complex> spectrum(const ComplexMatrix& a) {
  require_square(a, "spectrum");
  require_finite(a, "spectrum");
  require_spectrum_dim(a, "spectrum");
  const auto qt = schur(a);
  const std::size_t n = a.rows();
  std::vector<Complex> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = qt.t(i, i);
  std::stable_sort(ev.begin(), ev.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });

  // Residual certificate: each lambda must be within 1e-8 * ||A||_F of the
  // spectrum in the sigma_min sense.
  const double bound = 1e-8 * a.frobenius_norm();
  ComplexMatrix id = ComplexMatrix::identity(n);
  for (const Complex lambda : ev) {
    ComplexMatrix shifted = a;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda;
    const double smin = singular_extent(shifted).sigma_min;
    if (smin > bound) {
      std::ostringstream os;
      os << "spectrum: eigenvalue certificate failed (sigma_min " << smin
         << " exceeds " << bound << ")";
      throw NumericalError(os.str());
    }
  }
  return ev;
}

Eigendecomposition eigendecomposition(const ComplexMatrix& a) {
  require_square(a, "eigendecomposition");
  require_finite(a, "eigendecomposition");
  require_spectrum_dim(a, "eigendecomposition");
  const std::size_t n = a.rows();
  Eigendecomposition out;

  if (hermitian_residual(a) <= 1e-10 * std::max(1.0, a.frobenius_norm())) {
    const auto eig = hermitian_eig(hermitian_part(a));
    out.eigenvalues.assign(eig.eigenvalues.begin(), eig.eigenvalues.end());
    out.eigenvectors = eig.eigenvectors;
    out.condition = 1.0;
    out.hermitian_path = true;
    return out;
  }

  const auto qt = schur(a);
  const ComplexMatrix& t = qt.t;
  const double tnorm = std::max(t.frobenius_norm(), 1e-300);
  const double smin_den = kEps * tnorm;

  // Back-substitution for the triangular eigenvectors, guarded against
  // (near-)repeated diagonal entries; a defective input surfaces as an
  // ill-conditioned basis below rather than a crash here.
  ComplexMatrix y(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    y(j, j) = 1.0;
    const Complex lambda = t(j, j);
    for (std::size_t ii = j; ii-- > 0;) {
      Complex num(0.0, 0.0);
      for (std::size_t k = ii + 1; k <= j; ++k) num += t(ii, k) * y(k, j);
      Complex den = lambda - t(ii, ii);
      if (std::abs(den) < smin_den) {
        den = den == Complex(0.0, 0.0) ? Complex(smin_den, 0.0)
                                       : den / std::abs(den) * smin_den;
      }
      y(ii, j) = num / den;
    }
  }
  ComplexMatrix s = qt.q * y;
  for (std::size_t j = 0; j < n; ++j) {
    double nrm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm2 += std::norm(s(i, j));
    const double nrm = std::sqrt(nrm2);
    if (nrm > 0.0)
      for (std::size_t i = 0; i < n; ++i) s(i, j) /= nrm;
  }
  canonicalize_columns(s);

  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = t(i, i);
  out.eigenvectors = s;

  // Sort jointly by (real, imag) so the output is canonical.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t z) {
    const Complex& ex = out.eigenvalues[x];
    const Complex& ez = out.eigenvalues[z];
    if (ex.real() != ez.real()) return ex.real() < ez.real();
    return ex.imag() < ez.imag();
  });
  std::vector<Complex> ev(n);
  ComplexMatrix ss(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    ev[j] = out.eigenvalues[order[j]];
    for (std::size_t i = 0; i < n; ++i) ss(i, j) = s(i, order[j]);
  }
  out.eigenvalues = std::move(ev);
  out.eigenvectors = std::move(ss);

  const auto ext = singular_extent(out.eigenvectors);
  out.condition = ext.sigma_min > 0.0
                      ? ext.sigma_max / ext.sigma_min
                      : std::numeric_limits<double>::infinity();
  return out;
}

ComplexMatrix expm(const ComplexMatrix& a) {
  require_square(a, "expm");
  require_finite(a, "expm");
  const std::size_t n = a.rows();
  if (n == 0) return a;

  const double nrm = a.frobenius_norm();
  int s = 0;
  if (nrm > 0.5) {
    s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    s = std::min(s, 64);
  }
  ComplexMatrix b = std::pow(0.5, s) * a;

  ComplexMatrix sum = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k <= 64; ++k) {
    term = (1.0 / static_cast<double>(k)) * (term * b);
    sum += term;
    if (term.frobenius_norm() <= 0.25 * kEps * sum.frobenius_norm()) break;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

}  // namespace kreinkit
