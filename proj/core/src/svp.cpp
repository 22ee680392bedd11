#include "wrlat/svp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wrlat/detail/numeric.hpp"
#include "wrlat/error.hpp"

namespace wrlat {

namespace {

constexpr std::int64_t kMaxGramEntry = std::int64_t{1} << 62;
constexpr std::int64_t kMaxCoefficient = std::int64_t{1} << 24;
constexpr long double kPruneMargin = 1e-6L;

Integer from_i128(detail::Int128 v) {
  const bool negative = v < 0;
  detail::UInt128 mag = negative ? -static_cast<detail::UInt128>(v) : static_cast<detail::UInt128>(v);
  Integer out = static_cast<std::uint64_t>(mag >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(mag);
  return negative ? Integer(-out) : out;
}

bool canonical_sign(const CoefficientVector& x) {
  for (const std::int64_t v : x)
    if (v != 0) return v > 0;
  return false;
}

class Enumerator {
 public:
  Enumerator(std::vector<std::int64_t> gram, std::size_t dim, long double bound)
      : gram_(std::move(gram)), d_(dim), q_(dim * dim), x_(dim, 0), bound_(bound) {
    // q(i,i) and mu(i,j), j > i, with Q(x) = sum_i q(i,i) (x_i + sum_{j>i} mu(i,j) x_j)^2
    for (std::size_t i = 0; i < d_ * d_; ++i) q_[i] = static_cast<long double>(gram_[i]);
    for (std::size_t i = 0; i < d_; ++i) {
      for (std::size_t j = i + 1; j < d_; ++j) {
        q_[j * d_ + i] = q_[i * d_ + j];
        q_[i * d_ + j] /= q_[i * d_ + i];
      }
      for (std::size_t k = i + 1; k < d_; ++k)
        for (std::size_t l = k; l < d_; ++l) q_[k * d_ + l] -= q_[k * d_ + i] * q_[i * d_ + l];
    }
    for (std::size_t i = 0; i < d_; ++i)
      if (!(q_[i * d_ + i] > 0))
        throw Error(ErrorKind::PrecisionLoss, "floating Cholesky lost positivity on an exact positive definite Gram");
  }

  void run() { search(d_ - 1, 0.0L); }

  detail::Int128 best() const { return best_; }
  std::vector<CoefficientVector>& found() { return found_; }

 private:
  long double room(long double partial) const {
    return bound_ + kPruneMargin * std::max(1.0L, bound_) - partial;
  }

  void search(std::size_t level, long double partial) {
    long double center = 0;
    for (std::size_t j = level + 1; j < d_; ++j) center -= q_[level * d_ + j] * static_cast<long double>(x_[j]);
    const long double qii = q_[level * d_ + level];
    if (room(partial) < 0) return;

    const long double start = std::nearbyint(center);
    if (std::abs(start) > static_cast<long double>(kMaxCoefficient))
      throw Error(ErrorKind::Overflow, "enumeration coefficient exceeds 2^24");
    std::int64_t up = static_cast<std::int64_t>(start);
    std::int64_t down = up - 1;
    while (true) {
      // pick whichever unvisited neighbour of the center is closer
      const long double du = static_cast<long double>(up) - center;
      const long double dd = static_cast<long double>(down) - center;
      const bool take_up = std::abs(du) <= std::abs(dd);
      const std::int64_t value = take_up ? up : down;
      const long double diff = take_up ? du : dd;
      const long double contribution = qii * diff * diff;
      if (contribution > room(partial)) return;
      if (value > kMaxCoefficient || value < -kMaxCoefficient)
        throw Error(ErrorKind::Overflow, "enumeration coefficient exceeds 2^24");
      x_[level] = value;
      if (level == 0) {
        accept();
      } else {
        search(level - 1, partial + contribution);
      }
      if (take_up) {
        ++up;
      } else {
        --down;
      }
    }
  }

  void accept() {
    bool zero = true;
    for (const std::int64_t v : x_) zero = zero && v == 0;
    if (zero) return;
    detail::Int128 norm = 0;
    for (std::size_t i = 0; i < d_; ++i) {
      if (x_[i] == 0) continue;
      detail::Int128 row = 0;
      for (std::size_t j = 0; j < d_; ++j) row += static_cast<detail::Int128>(gram_[i * d_ + j]) * x_[j];
      norm += row * x_[i];
    }
    if (norm < best_) {
      best_ = norm;
      found_.clear();
      bound_ = static_cast<long double>(norm);
    }
    if (norm == best_ && canonical_sign(x_)) found_.push_back(x_);
  }

  std::vector<std::int64_t> gram_;
  std::size_t d_;
  std::vector<long double> q_;
  CoefficientVector x_;
  long double bound_;
  detail::Int128 best_ = std::numeric_limits<detail::Int128>::max();
  std::vector<CoefficientVector> found_;
};

IntMatrix to_matrix(const std::vector<CoefficientVector>& rows, std::size_t dim) {
  IntMatrix m(rows.size(), dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = rows[i][j];
  return m;
}

// Conjugates sigma_{g^k}(alpha) and the factors f(zeta_p^i) at one precision tier.
template <class Real>
CirculantCheck circulant_at(const Element& alpha, const CharacterChoice& choice) {
  using std::abs;
  using std::sqrt;
  const auto embedding = detail::embedding_at<Real>(choice);
  const auto conj = detail::conjugates_at<Real>(embedding, alpha);
  const std::size_t p = conj.size();
  Real norm_sq = 0;
  for (const Real& v : conj) norm_sq += v * v;
  const Real norm = sqrt(norm_sq);

  CirculantCheck out;
  detail::Complex<Real> det{Real(1), Real(0)};
  for (std::size_t i = 0; i < p; ++i) {
    detail::KahanSum<Real> re, im;
    for (std::size_t k = 0; k < p; ++k) {
      const auto z = detail::root_of_unity<Real>(static_cast<std::int64_t>(i * k), static_cast<std::int64_t>(p));
      re.add(conj[k] * z.re);
      im.add(conj[k] * z.im);
    }
    const detail::Complex<Real> f{re.sum, im.sum};
    out.factor_moduli.push_back(static_cast<double>(f.abs()));
    det = det * f;
  }
  Real scale = 1;
  for (std::size_t i = 0; i < p; ++i) scale *= norm;
  out.det_numeric = static_cast<double>(det.re);
  out.tolerance = static_cast<double>(Real(1e-6) * scale);
  out.factor_tolerance = static_cast<double>(Real(1e-6) * norm);
  out.nonzero = abs(det.re) > Real(1e-6) * scale;
  return out;
}

}  // namespace

ShortVectorReport enumerate_minimum(const IntMatrix& gram, EnumerationOptions options) {
  const std::size_t d = gram.rows();
  if (d == 0 || gram.cols() != d) throw Error(ErrorKind::BadParams, "Gram matrix must be square and nonempty");
  if (d > kMaxEnumerationDimension)
    throw Error(ErrorKind::DimensionTooLarge, "enumeration supports dimension up to " +
                                                   std::to_string(kMaxEnumerationDimension));
  if (!gram.is_symmetric() || !is_positive_definite(gram))
    throw Error(ErrorKind::NotPositiveDefinite, "Gram matrix is not symmetric positive definite");

  std::vector<std::int64_t> entries(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const Integer& v = gram(i, j);
      if (v > kMaxGramEntry || v < -kMaxGramEntry) throw Error(ErrorKind::Overflow, "Gram entry exceeds 2^62");
      entries[i * d + j] = v.convert_to<std::int64_t>();
    }

  std::int64_t smallest = entries[0];
  for (std::size_t i = 1; i < d; ++i) smallest = std::min(smallest, entries[i * d + i]);
  long double bound = static_cast<long double>(smallest);
  if (options.initial_bound) {
    if (*options.initial_bound <= 0) throw Error(ErrorKind::BadParams, "initial bound must be positive");
    bound = options.initial_bound->convert_to<long double>();
  }

  Enumerator search(std::move(entries), d, bound);
  search.run();
  if (search.found().empty()) throw Error(ErrorKind::NotFound, "no nonzero vector within the initial bound");

  ShortVectorReport report;
  report.dimension = d;
  report.minimum = from_i128(search.best());
  report.minimal_vectors = std::move(search.found());
  std::sort(report.minimal_vectors.begin(), report.minimal_vectors.end());
  report.span_rank = rank(to_matrix(report.minimal_vectors, d));
  report.well_rounded = report.span_rank == d;
  if (report.well_rounded) {
    std::vector<CoefficientVector> chosen;
    for (const auto& v : report.minimal_vectors) {
      chosen.push_back(v);
      if (rank(to_matrix(chosen, d)) < chosen.size()) chosen.pop_back();
      if (chosen.size() == d) break;
    }
    report.witness = std::move(chosen);
  }
  return report;
}

ShortVectorReport enumerate_minimum(const GramMatrix& gram, EnumerationOptions options) {
  ShortVectorReport r = enumerate_minimum(gram.entries, std::move(options));
  r.source = gram.source;
  return r;
}

ClosedFormCheck verify_closed_form(const ModuleBasis& basis) {
  ClosedFormCheck check;
  check.closed_min = closed_form_minimum(basis);
  check.report = enumerate_minimum(gram(basis));
  check.enum_min = check.report.minimum;
  check.agree = check.closed_min == check.enum_min;
  return check;
}

CirculantCheck circulant_det_check(const Element& alpha, const CharacterChoice& choice, Precision start) {
  if (alpha.field()->spec() != choice.field)
    throw Error(ErrorKind::FieldMismatch, "character choice belongs to a different field");
  if (alpha.is_rational_integer()) throw Error(ErrorKind::AlphaRational, "alpha is a rational integer");
  const Rational trace = trace_linear(alpha);
  const int ceiling = std::min(start.tier() * 4, kMaxPrecisionBits);

  for (Precision precision{start.tier()};; precision = precision.doubled()) {
    CirculantCheck out = dispatch_precision(precision, [&](auto real) {
      return circulant_at<decltype(real)>(alpha, choice);
    });
    out.precision_bits = precision.tier();
    out.trace = trace;

    bool factors_clear = true;
    for (std::size_t i = 1; i < out.factor_moduli.size(); ++i)
      factors_clear = factors_clear && out.factor_moduli[i] > out.factor_tolerance;
    const bool suspicious = trace != 0 && (!out.nonzero || !factors_clear);
    if (!suspicious) {
      IntMatrix coords(static_cast<std::size_t>(choice.field.p), static_cast<std::size_t>(choice.field.p));
      for (std::size_t k = 0; k < coords.rows(); ++k) {
        const Element image = alpha.apply_theta(static_cast<std::int64_t>(k));
        for (std::size_t j = 0; j < coords.cols(); ++j) coords(k, j) = image[j];
      }
      const double det_e = embedding_determinant(embedding_matrix(choice, precision));
      out.det_from_coordinates = abs(determinant(coords)).convert_to<double>() * det_e;
      return out;
    }
    if (precision.tier() * 2 > ceiling)
      throw Error(ErrorKind::PrecisionLoss, "circulant determinant looks zero although Tr(alpha) != 0 at " +
                                                std::to_string(precision.tier()) + " bits");
  }
}

OrbitSublattice orbit_sublattice(const Element& alpha) {
  if (alpha.is_rational_integer()) throw Error(ErrorKind::AlphaRational, "alpha is a rational integer");
  const std::size_t p = alpha.coords().size();
  OrbitSublattice out;
  out.coords = IntMatrix(p, p);
  for (std::size_t k = 0; k < p; ++k) {
    out.orbit.push_back(alpha.apply_theta(static_cast<std::int64_t>(k)));
    for (std::size_t j = 0; j < p; ++j) out.coords(k, j) = out.orbit.back()[j];
  }
  out.gram.entries = IntMatrix(p, p);
  out.gram.source = "orbit";
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      const Rational v = trace_bilinear(out.orbit[i], out.orbit[j]);
      if (denominator(v) != 1) throw Error(ErrorKind::VerificationFailed, "orbit Gram entry is not an integer");
      out.gram.entries(i, j) = numerator(v);
    }
  out.trace = trace_linear(alpha);
  out.rank = rank(out.coords);
  out.full_rank = out.rank == p;
  out.circulant = true;
  out.equal_norms = true;
  for (std::size_t i = 0; i < p; ++i) {
    out.equal_norms = out.equal_norms && out.gram.entries(i, i) == out.gram.entries(0, 0);
    for (std::size_t j = 0; j < p; ++j)
      out.circulant = out.circulant && out.gram.entries(i, j) == out.gram.entries(0, (j + p - i) % p);
  }
  if (out.full_rank) out.report = enumerate_minimum(out.gram);
  return out;
}

}  // namespace wrlat
