// Copyright 2026 The qidt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qidt/errors.hpp"
#include "qidt/linalg.hpp"
#include "qidt/rng.hpp"

namespace qidt {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Polynomials over Z_p, coefficient lists with the constant term first.
// ---------------------------------------------------------------------------
namespace poly {

using Poly = std::vector<int>;

inline int mod(long long a, int p) {
    const long long r = a % p;
    return static_cast<int>(r < 0 ? r + p : r);
}

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }  // -1 for zero

inline int inverse_mod(int a, int p) {
    // Fermat: a^(p-2)
    long long result = 1, base = mod(a, p);
    for (int e = p - 2; e > 0; e >>= 1) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
    }
    return static_cast<int>(result);
}

inline Poly sub(const Poly& a, const Poly& b, int p) {
    Poly out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = mod(static_cast<long long>(out[i]) - b[i], p);
    trim(out);
    return out;
}

inline Poly mul(const Poly& a, const Poly& b, int p) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = mod(out[i + j] + static_cast<long long>(a[i]) * b[j], p);
    trim(out);
    return out;
}

/// Quotient and remainder of a / b, b nonzero.
inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b, int p) {
    trim(a);
    const int db = degree(b);
    if (db < 0) fail(ErrorKind::DivisionByZero, "polynomial division by zero");
    const int lead_inv = inverse_mod(b.back(), p);
    Poly q(std::max(0, degree(a) - db + 1), 0);
    while (degree(a) >= db) {
        const int shift = degree(a) - db;
        const int c = mod(static_cast<long long>(a.back()) * lead_inv, p);
        q[static_cast<std::size_t>(shift)] = c;
        for (int i = 0; i <= db; ++i) {
            auto& ai = a[static_cast<std::size_t>(i + shift)];
            ai = mod(ai - static_cast<long long>(c) * b[static_cast<std::size_t>(i)], p);
        }
        trim(a);
    }
    trim(q);
    return {q, a};
}

inline Poly rem(const Poly& a, const Poly& b, int p) { return divmod(a, b, p).second; }

inline Poly gcd(Poly a, Poly b, int p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const int inv = inverse_mod(a.back(), p);
        for (auto& c : a) c = mod(static_cast<long long>(c) * inv, p);
    }
    return a;
}

/// base^e mod f
inline Poly powmod(Poly base, std::uint64_t e, const Poly& f, int p) {
    Poly result{1};
    base = rem(base, f, p);
    while (e > 0) {
        if (e & 1) result = rem(mul(result, base, p), f, p);
        base = rem(mul(base, base, p), f, p);
        e >>= 1;
    }
    return result;
}

/// Rabin's test: f | x^{p^n} - x and gcd(x^{p^{n/q}} - x, f) = 1 for every prime q | n.
inline bool is_irreducible(const Poly& f, int p) {
    const int n = degree(f);
    if (n < 1) return false;
    if (n == 1) return true;
    // frob[k] = x^{p^k} mod f
    std::vector<Poly> frob{Poly{0, 1}};
    for (int k = 1; k <= n; ++k) frob.push_back(powmod(frob.back(), static_cast<std::uint64_t>(p), f, p));
    const Poly x{0, 1};
    if (!sub(frob[static_cast<std::size_t>(n)], x, p).empty()) return false;
    for (int q = 2; q <= n; ++q) {
        if (n % q != 0 || !is_prime(static_cast<std::uint64_t>(q))) continue;
        const Poly g = gcd(f, sub(frob[static_cast<std::size_t>(n / q)], x, p), p);
        if (degree(g) != 0) return false;
    }
    return true;
}

}  // namespace poly

// ---------------------------------------------------------------------------
// GF(p^n)
// ---------------------------------------------------------------------------

struct FieldSpec {
    int p;
    int n;
    poly::Poly modulus;  // monic, degree n, constant term first

    /// p^n
    int order() const {
        int q = 1;
        for (int i = 0; i < n; ++i) q *= p;
        return q;
    }

    static FieldSpec make(int p, int n, poly::Poly modulus) {
        if (p == 2) fail(ErrorKind::EvenPrime, "even prime unsupported");
        if (!is_prime(static_cast<std::uint64_t>(p))) fail(ErrorKind::Validation, std::to_string(p) + " is not prime");
        if (n < 1) fail(ErrorKind::RangeError, "extension degree must be >= 1");
        for (auto& c : modulus) c = poly::mod(c, p);
        poly::trim(modulus);
        if (poly::degree(modulus) != n || modulus.back() != 1) {
            fail(ErrorKind::Validation, "modulus must be monic of degree " + std::to_string(n));
        }
        if (!poly::is_irreducible(modulus, p)) fail(ErrorKind::Validation, "modulus is reducible");
        return {p, n, std::move(modulus)};
    }
};

/// First irreducible monic degree-n polynomial, ordering candidates by
/// sum_i c_i p^i (constant term varies fastest).
inline FieldSpec find_irreducible(int p, int n) {
    if (p == 2) fail(ErrorKind::EvenPrime, "even prime unsupported");
    if (!is_prime(static_cast<std::uint64_t>(p))) fail(ErrorKind::Validation, std::to_string(p) + " is not prime");
    if (n < 1) fail(ErrorKind::RangeError, "extension degree must be >= 1");
    std::uint64_t count = 1;
    for (int i = 0; i < n; ++i) count *= static_cast<std::uint64_t>(p);
    for (std::uint64_t code = 0; code < count; ++code) {
        poly::Poly f(static_cast<std::size_t>(n) + 1, 0);
        std::uint64_t c = code;
        for (int i = 0; i < n; ++i) {
            f[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::uint64_t>(p));
            c /= static_cast<std::uint64_t>(p);
        }
        f[static_cast<std::size_t>(n)] = 1;
        if (poly::is_irreducible(f, p)) return {p, n, f};
    }
    fail(ErrorKind::InternalError, "no irreducible polynomial found");
}

/// Element of GF(p^n) as a length-n coefficient vector over Z_p.
class FieldElement {
  public:
    FieldElement(std::shared_ptr<const FieldSpec> spec, std::vector<int> coeffs)
        : spec_(std::move(spec)), coeffs_(std::move(coeffs)) {
        coeffs_.resize(static_cast<std::size_t>(spec_->n), 0);
        for (auto& c : coeffs_) c = poly::mod(c, spec_->p);
    }

    static FieldElement zero(std::shared_ptr<const FieldSpec> spec) { return {std::move(spec), {}}; }
    static FieldElement one(std::shared_ptr<const FieldSpec> spec) { return {std::move(spec), {1}}; }

    /// Element with enumeration index i = sum_k c_k p^k.
    static FieldElement from_index(std::shared_ptr<const FieldSpec> spec, int index) {
        std::vector<int> c(static_cast<std::size_t>(spec->n), 0);
        for (auto& ck : c) {
            ck = index % spec->p;
            index /= spec->p;
        }
        return {std::move(spec), std::move(c)};
    }

    int index() const {
        int idx = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) idx = idx * spec_->p + *it;
        return idx;
    }

    const std::vector<int>& coeffs() const { return coeffs_; }
    const FieldSpec& spec() const { return *spec_; }
    const std::shared_ptr<const FieldSpec>& spec_ptr() const { return spec_; }
    bool is_zero() const {
        for (const int c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        return a.same_field(b) && a.coeffs_ == b.coeffs_;
    }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        a.require_same(b);
        std::vector<int> c(a.coeffs_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs_[i] + b.coeffs_[i];
        return {a.spec_, std::move(c)};
    }

    FieldElement operator-() const {
        std::vector<int> c(coeffs_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = -coeffs_[i];
        return {spec_, std::move(c)};
    }

    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }

    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        a.require_same(b);
        const int p = a.spec_->p;
        poly::Poly x = a.coeffs_, y = b.coeffs_;
        poly::trim(x);
        poly::trim(y);
        return {a.spec_, poly::rem(poly::mul(x, y, p), a.spec_->modulus, p)};
    }

    FieldElement pow(std::uint64_t e) const {
        FieldElement result = one(spec_), base = *this;
        while (e > 0) {
            if (e & 1) result = result * base;
            base = base * base;
            e >>= 1;
        }
        return result;
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    FieldElement inv() const {
        if (is_zero()) fail(ErrorKind::DivisionByZero, "zero has no inverse");
        const int p = spec_->p;
        poly::Poly r0 = spec_->modulus, r1 = coeffs_;
        poly::trim(r1);
        poly::Poly s0{}, s1{1};
        while (poly::degree(r1) > 0) {
            auto [q, r] = poly::divmod(r0, r1, p);
            poly::Poly s = poly::sub(s0, poly::mul(q, s1, p), p);
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s);
        }
        // r1 is a nonzero constant c: s1 * a = c (mod f)
        const int cinv = poly::inverse_mod(r1.front(), p);
        for (auto& c : s1) c = poly::mod(static_cast<long long>(c) * cinv, p);
        return {spec_, s1};
    }

  private:
    bool same_field(const FieldElement& o) const {
        return spec_ == o.spec_ || (spec_->p == o.spec_->p && spec_->modulus == o.spec_->modulus);
    }
    void require_same(const FieldElement& o) const {
        if (!same_field(o)) fail(ErrorKind::DimMismatch, "elements of different fields");
    }

    std::shared_ptr<const FieldSpec> spec_;
    std::vector<int> coeffs_;
};

/// All p^n elements in enumeration order (constant coefficient fastest).
inline std::vector<FieldElement> enumerate_field(const std::shared_ptr<const FieldSpec>& spec) {
    std::vector<FieldElement> out;
    const int q = spec->order();
    out.reserve(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) out.push_back(FieldElement::from_index(spec, i));
    return out;
}

/// Tr(x) = x + x^p + ... + x^{p^{n-1}}, an element of the prime subfield.
inline int field_trace(const FieldElement& x) {
    const int p = x.spec().p;
    FieldElement term = x, sum = x;
    for (int k = 1; k < x.spec().n; ++k) {
        term = term.pow(static_cast<std::uint64_t>(p));
        sum = sum + term;
    }
    const auto& c = sum.coeffs();
    for (std::size_t i = 1; i < c.size(); ++i) {
        if (c[i] != 0) fail(ErrorKind::InternalError, "trace left the prime subfield; modulus is not irreducible");
    }
    return c.front();
}

/// omega^m with omega = exp(2 pi i / p), m reduced mod p before the angle.
inline cplx root_of_unity(long long m, int p) {
    const double angle = 2.0 * M_PI * static_cast<double>(poly::mod(m, p)) / static_cast<double>(p);
    return {std::cos(angle), std::sin(angle)};
}

/// Additive character sum sum_k omega^{Tr(k x)}.
inline cplx gauss_sum(const FieldElement& x) {
    cplx s = 0.0;
    for (const auto& k : enumerate_field(x.spec_ptr())) s += root_of_unity(field_trace(k * x), x.spec().p);
    return s;
}

// ---------------------------------------------------------------------------
// Mutually unbiased bases
// ---------------------------------------------------------------------------

inline constexpr int kDefaultMubCap = 49;

/// d + 1 bases as unitary columns; bases[d] is the standard basis.
struct MubSet {
    int p = 0;
    int n = 0;
    int d = 0;
    std::vector<Matrix> bases;

    std::vector<PureState> vectors() const {
        std::vector<PureState> out;
        for (const auto& b : bases)
            for (Eigen::Index j = 0; j < b.cols(); ++j) out.push_back(PureState::normalized(b.col(j)));
        return out;
    }
};

struct MubDiagnostics {
    double max_unitarity_residual = 0.0;
    double max_overlap_deviation = 0.0;  // max | |<e|f>| - 1/sqrt(d) | across bases
};

/// Unitarity of each basis and unbiasedness of every cross-basis pair
/// for a list of d x d basis matrices.
inline MubDiagnostics check_mub(const std::vector<Matrix>& bases) {
    MubDiagnostics out;
    if (bases.empty()) return out;
    const double target = 1.0 / std::sqrt(static_cast<double>(bases.front().rows()));
    for (const auto& b : bases) out.max_unitarity_residual = std::max(out.max_unitarity_residual, unitarity_residual(b));
    for (std::size_t a = 0; a < bases.size(); ++a)
        for (std::size_t c = a + 1; c < bases.size(); ++c) {
            const Matrix overlaps = bases[a].adjoint() * bases[c];
            out.max_overlap_deviation =
                std::max(out.max_overlap_deviation, (overlaps.cwiseAbs().array() - target).abs().maxCoeff());
        }
    return out;
}

/// <l|e^k_j> = omega^{Tr(k l^2 + j l)} / sqrt(d) for k, j, l in GF(p^n),
/// indices in field enumeration order, plus the standard basis.
inline MubSet wootters_fields_mub(int p, int n, int cap = kDefaultMubCap) {
    if (p == 2) fail(ErrorKind::EvenPrime, "even prime unsupported");
    const auto spec = std::make_shared<const FieldSpec>(find_irreducible(p, n));
    const int d = spec->order();
    if (d > cap) fail(ErrorKind::CapExceeded, "dimension " + std::to_string(d) + " exceeds cap " + std::to_string(cap));
    const auto elems = enumerate_field(spec);

    // Tr is Z_p-linear, so Tr(x) = sum_i c_i Tr(t^i).
    std::vector<int> basis_trace;
    for (int i = 0; i < n; ++i) {
        std::vector<int> mono(static_cast<std::size_t>(n), 0);
        mono[static_cast<std::size_t>(i)] = 1;
        basis_trace.push_back(field_trace(FieldElement(spec, mono)));
    }
    const auto trace_of = [&](const FieldElement& x) {
        long long t = 0;
        for (int i = 0; i < n; ++i) t += static_cast<long long>(x.coeffs()[static_cast<std::size_t>(i)]) * basis_trace[static_cast<std::size_t>(i)];
        return poly::mod(t, p);
    };

    MubSet out{p, n, d, {}};
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<FieldElement> squares;
    for (const auto& l : elems) squares.push_back(l * l);
    for (int k = 0; k < d; ++k) {
        Matrix basis(d, d);
        for (int l = 0; l < d; ++l) {
            const int t_quad = trace_of(elems[static_cast<std::size_t>(k)] * squares[static_cast<std::size_t>(l)]);
            for (int j = 0; j < d; ++j) {
                const int t_lin = trace_of(elems[static_cast<std::size_t>(j)] * elems[static_cast<std::size_t>(l)]);
                basis(l, j) = norm * root_of_unity(static_cast<long long>(t_quad) + t_lin, p);
            }
        }
        out.bases.push_back(std::move(basis));
    }
    out.bases.push_back(identity(d));
    return out;
}

// ---------------------------------------------------------------------------
// Spherical 2-designs
// ---------------------------------------------------------------------------

/// (1/|D|) sum_v |v><v| (x) |v><v| on C^d (x) C^d.
inline Matrix design_operator(const std::vector<PureState>& vectors) {
    if (vectors.empty()) fail(ErrorKind::Validation, "design needs at least one vector");
    const int d = vectors.front().dim();
    Matrix w(d * d, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        if (vectors[k].dim() != d) fail(ErrorKind::DimMismatch, "design vectors differ in dimension");
        w.col(static_cast<Eigen::Index>(k)) = kron(vectors[k].amplitudes(), vectors[k].amplitudes());
    }
    Matrix out = w * w.adjoint() / static_cast<double>(vectors.size());
    return (out + out.adjoint()) / 2.0;
}

/// |design average of <v|A|v><v|B|v> - tr(Pi (A (x) B))|
inline double design_deviation(const std::vector<PureState>& vectors, const Matrix& a, const Matrix& b) {
    cplx avg = 0.0;
    for (const auto& v : vectors) avg += v.expectation(a) * v.expectation(b);
    avg /= static_cast<double>(vectors.size());
    const double d = vectors.front().dim();
    const cplx exact = (a.trace() * b.trace() + (a * b).trace()) / (d * (d + 1.0));
    return std::abs(avg - exact);
}

/// Max deviation over random complex Gaussian pairs (A, B).
inline double design_check(const std::vector<PureState>& vectors, int trials, Rng& rng) {
    if (vectors.empty()) fail(ErrorKind::Validation, "design needs at least one vector");
    if (trials < 1) fail(ErrorKind::RangeError, "trials must be >= 1");
    const int d = vectors.front().dim();
    for (const auto& v : vectors)
        if (v.dim() != d) fail(ErrorKind::DimMismatch, "design vectors differ in dimension");
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Matrix a = gaussian_matrix(d, d, rng);
        const Matrix b = gaussian_matrix(d, d, rng);
        worst = std::max(worst, design_deviation(vectors, a, b));
    }
    return worst;
}

}  // namespace qidt
