#pragma once
// Generalized bracket engine.  The central object is the bidifferential
// power operator
//
//     f D^k g = sum_{|a|+|b|=k} (-1)^|b| k!/(a! b!) (d_q^a d_p^b f)(d_p^a d_q^b g)
//
// over multi-indices a, b in N^3 (k = 1 is the Poisson bracket).  A bracket
// theory is a coefficient sequence a_1..a_N on top of the fixed first-order
// term:
//
//     [[f, g]] = f D^1 g + sum_{n=1..N} a_n hbar^(2n) f D^(2n+1) g.
//
// The Moyal preset a_n = (-1)^n / (2^(2n) (2n+1)!) recovers the usual
// quantum bracket; the empty sequence is the Poisson preset.  Coefficients
// and hbar are expressions, so they may stay formal symbols.

#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <gphase/expr.hpp>
#include <gphase/quadrature.hpp>

namespace gphase {

namespace detail {

// first three slots: d/dq_i orders; last three: d/dp_i orders
using DerivIndex = std::array<int, 6>;

inline Rational factorial(int n) {
    Rational f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline void deriv_indices(int total, std::vector<DerivIndex>& out) {
    DerivIndex idx{};
    auto rec = [&](auto&& self, int slot, int left) -> void {
        if (slot == 5) {
            idx[5] = left;
            out.push_back(idx);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            idx[slot] = v;
            self(self, slot + 1, left - v);
        }
    };
    rec(rec, 0, total);
}

// All mixed derivatives of one expression up to a requested total order,
// built level by level (each entry differentiates the entry with the first
// nonzero slot decremented, so every derivative is computed exactly once).
class DerivTable {
public:
    explicit DerivTable(const PhaseExpr& f) { table_.emplace(DerivIndex{}, f); }

    void extend(int order) {
        std::vector<DerivIndex> level;
        for (int total = built_ + 1; total <= order; ++total) {
            level.clear();
            deriv_indices(total, level);
            for (const DerivIndex& idx : level) {
                int slot = 0;
                while (idx[slot] == 0) ++slot;
                DerivIndex parent = idx;
                parent[slot] -= 1;
                const PhaseExpr& base = table_.at(parent);
                table_.emplace(idx, slot < 3 ? base.dq(slot + 1) : base.dp(slot - 2));
            }
            built_ = total;
        }
    }

    const PhaseExpr& at(const DerivIndex& idx) const { return table_.at(idx); }

private:
    std::map<DerivIndex, PhaseExpr> table_;
    int built_ = 0;
};

inline PhaseExpr d_omega_with(const DerivTable& tf, const DerivTable& tg, int k) {
    std::vector<DerivIndex> split;
    deriv_indices(k, split);
    PhaseExpr out;
    Rational kfac = factorial(k);
    for (const DerivIndex& idx : split) {
        // idx = (a, b) acting on f; g receives (b, a)
        const DerivIndex gi{idx[3], idx[4], idx[5], idx[0], idx[1], idx[2]};
        const PhaseExpr& lf = tf.at(idx);
        if (lf.is_zero()) continue;
        const PhaseExpr& rg = tg.at(gi);
        if (rg.is_zero()) continue;
        Rational c = kfac;
        for (int s = 0; s < 6; ++s) c /= factorial(idx[s]);
        if ((idx[3] + idx[4] + idx[5]) % 2) c = -c;
        out += c * (lf * rg);
    }
    return out;
}

} // namespace detail

inline PhaseExpr d_omega_pow(const PhaseExpr& f, const PhaseExpr& g, int k) {
    if (k < 0) throw std::invalid_argument("bidifferential order must be >= 0");
    detail::DerivTable tf(f), tg(g);
    tf.extend(k);
    tg.extend(k);
    return detail::d_omega_with(tf, tg, k);
}

inline PhaseExpr poisson(const PhaseExpr& f, const PhaseExpr& g) {
    return d_omega_pow(f, g, 1);
}

struct BracketSpec {
    std::vector<PhaseExpr> coeffs;               // a_1..a_N
    PhaseExpr hbar = PhaseExpr::param("hbar");

    int max_order() const { return static_cast<int>(coeffs.size()); }

    static Rational moyal_coeff(int n) {
        Rational c = 1;
        for (int j = 0; j < 2 * n; ++j) c /= 2;
        c /= detail::factorial(2 * n + 1);
        return (n % 2) ? -c : c;
    }

    static BracketSpec poisson() { return {}; }

    static BracketSpec moyal(int N, PhaseExpr hbar = PhaseExpr::param("hbar")) {
        BracketSpec s;
        s.hbar = std::move(hbar);
        for (int n = 1; n <= N; ++n)
            s.coeffs.push_back(PhaseExpr::rational(moyal_coeff(n)));
        return s;
    }

    // formal coefficients a1..aN
    static BracketSpec symbolic(int N, PhaseExpr hbar = PhaseExpr::param("hbar")) {
        BracketSpec s;
        s.hbar = std::move(hbar);
        for (int n = 1; n <= N; ++n)
            s.coeffs.push_back(PhaseExpr::param("a" + std::to_string(n)));
        return s;
    }
};

// The omitted orders k = 2N+3, 2N+5, ... all vanish identically once k
// exceeds the total degree of a purely polynomial operand (each order takes
// k derivatives of both operands).  Rational-in-Q operands never qualify.
inline bool bracket_truncation_complete(const PhaseExpr& f, const PhaseExpr& g, int N) {
    int kmin = 2 * N + 3;
    if (f.is_polynomial() && f.total_degree() < kmin) return true;
    if (g.is_polynomial() && g.total_degree() < kmin) return true;
    return false;
}

struct BracketResult {
    PhaseExpr value;
    bool truncation_complete = false;
};

inline BracketResult gmb(const PhaseExpr& f, const PhaseExpr& g, const BracketSpec& spec) {
    detail::DerivTable tf(f), tg(g);
    tf.extend(1);
    tg.extend(1);
    PhaseExpr out = detail::d_omega_with(tf, tg, 1);
    bool fpoly = f.is_polynomial(), gpoly = g.is_polynomial();
    int fdeg = fpoly ? f.total_degree() : 0;
    int gdeg = gpoly ? g.total_degree() : 0;
    for (int n = 1; n <= spec.max_order(); ++n) {
        if (spec.coeffs[n - 1].is_zero()) continue;
        int k = 2 * n + 1;
        if ((fpoly && fdeg < k) || (gpoly && gdeg < k)) continue; // order vanishes
        tf.extend(k);
        tg.extend(k);
        PhaseExpr term = detail::d_omega_with(tf, tg, k);
        if (term.is_zero()) continue;
        out += spec.coeffs[n - 1] * spec.hbar.pow(2 * n) * term;
    }
    return {out, bracket_truncation_complete(f, g, spec.max_order())};
}

// Order-wise vanishing scan: entry j reports whether f D^(2j+1) g is exactly
// zero (j = 0..K).  All-true implies conservation under every coefficient
// choice a_n.
struct OrderScan {
    std::vector<int> orders;
    std::vector<bool> zero;
    bool all_zero = true;
};

inline OrderScan check_zero_orderwise(const PhaseExpr& f, const PhaseExpr& g, int K) {
    detail::DerivTable tf(f), tg(g);
    OrderScan scan;
    for (int n = 0; n <= K; ++n) {
        int k = 2 * n + 1;
        tf.extend(k);
        tg.extend(k);
        bool z = detail::d_omega_with(tf, tg, k).is_zero();
        scan.orders.push_back(k);
        scan.zero.push_back(z);
        scan.all_zero = scan.all_zero && z;
    }
    return scan;
}

// Time-ordered step product Prod_k (id - weight_k L_{H_k}) with
// L_H f = [[H, f]].  Steps are listed latest-time first (leftmost factor
// first), so the product is applied to the target in reverse list order.
struct LiouvillianStep {
    PhaseExpr hamiltonian;
    PhaseExpr weight;
};

inline PhaseExpr liouvillian_product(const std::vector<LiouvillianStep>& steps,
                                     PhaseExpr target, const BracketSpec& spec) {
    for (auto it = steps.rbegin(); it != steps.rend(); ++it)
        target = target - it->weight * gmb(it->hamiltonian, target, spec).value;
    return target;
}

// ---------------------------------------------------------------------------
// Numeric adjointness check on one degree of freedom.  Test functions are
// P(q1, p1) * exp(-(q1^2 + p1^2) inv_w2 / 2); the family is closed under the
// bracket with a polynomial h, so L_h g is computed exactly and only the
// final integrals are numeric.

struct GaussTestFn {
    PhaseExpr poly = PhaseExpr::rational(1);
    Rational inv_w2 = 1;
};

namespace detail {

inline void require_axis1(const PhaseExpr& e, const char* what) {
    for (const auto& [m, c] : e.terms()) {
        bool ok = m.qe[1] == 0 && m.qe[2] == 0 && m.pe[1] == 0 && m.pe[2] == 0 &&
                  m.rodd == 0 && m.params.empty();
        if (!ok || e.qden() != 0)
            throw std::invalid_argument(std::string(what) +
                                        " must be a polynomial in q1, p1 only");
    }
}

inline Rational as_rational(const PhaseExpr& e, const char* what) {
    if (e.is_zero()) return 0;
    if (e.qden() == 0 && e.term_count() == 1) {
        const auto& [m, c] = *e.terms().begin();
        if (m == Monomial{}) return c;
    }
    throw std::invalid_argument(std::string(what) + " must be numeric here");
}

// mixed-derivative table of a Gaussian test function, axis 1 only
class GaussDerivTable {
public:
    GaussDerivTable(const GaussTestFn& g, int order) : inv_(g.inv_w2) {
        polys_[{0, 0}] = g.poly;
        for (int total = 1; total <= order; ++total)
            for (int a = 0; a <= total; ++a) {
                int b = total - a;
                std::array<int, 2> idx{a, b}, par = idx;
                bool dq = a > 0;
                par[dq ? 0 : 1] -= 1;
                const PhaseExpr& base = polys_.at(par);
                PhaseExpr var = dq ? PhaseExpr::q(1) : PhaseExpr::p(1);
                polys_[idx] = (dq ? base.dq(1) : base.dp(1)) - (inv_ * (var * base));
            }
    }
    const PhaseExpr& at(int dq_ord, int dp_ord) const { return polys_.at({dq_ord, dp_ord}); }

private:
    std::map<std::array<int, 2>, PhaseExpr> polys_;
    Rational inv_;
};

// [[h, g]] for polynomial h and Gaussian g; returns a test function with the
// same envelope
inline GaussTestFn liouville_action(const PhaseExpr& h, const GaussTestFn& g,
                                    const BracketSpec& spec) {
    require_axis1(h, "bracket hamiltonian");
    require_axis1(g.poly, "test function");
    Rational hb = as_rational(spec.hbar, "hbar");

    int kmax = 1;
    for (int n = 1; n <= spec.max_order(); ++n)
        if (!spec.coeffs[n - 1].is_zero()) kmax = 2 * n + 1;

    DerivTable th(h);
    th.extend(kmax);
    GaussDerivTable tg(g, kmax);

    auto d_pow = [&](int k) {
        PhaseExpr out;
        Rational kfac = factorial(k);
        for (int a = 0; a <= k; ++a) {
            int b = k - a;
            const PhaseExpr& lh = th.at({a, 0, 0, b, 0, 0});
            if (lh.is_zero()) continue;
            Rational c = kfac / (factorial(a) * factorial(b));
            if (b % 2) c = -c;
            out += c * (lh * tg.at(b, a));
        }
        return out;
    };

    GaussTestFn out;
    out.inv_w2 = g.inv_w2;
    out.poly = d_pow(1);
    Rational hb2n = 1;
    for (int n = 1; n <= spec.max_order(); ++n) {
        hb2n *= hb * hb;
        Rational an = as_rational(spec.coeffs[n - 1], "bracket coefficient");
        if (an == 0) continue;
        out.poly += (an * hb2n) * d_pow(2 * n + 1);
    }
    return out;
}

inline double gauss_eval(const GaussTestFn& g, double q, double p) {
    double inv = static_cast<double>(g.inv_w2);
    return g.poly.evaluate({q, 0, 0}, {p, 0, 0}) * std::exp(-0.5 * inv * (q * q + p * p));
}

inline void check_tail_decay(const GaussTestFn& f, double L) {
    double interior = std::abs(gauss_eval(f, 0.0, 0.0)) +
                      std::abs(gauss_eval(f, 1.0, 0.0)) +
                      std::abs(gauss_eval(f, 0.0, 1.0));
    double tail = 0.0;
    for (int j = 0; j < 16; ++j) {
        double th = 2.0 * 3.14159265358979324 * j / 16.0;
        tail = std::max(tail, std::abs(gauss_eval(f, L * std::cos(th), L * std::sin(th))));
    }
    if (tail * (2 * L) * (2 * L) > 1e-12 * std::max(interior, 1e-300))
        throw std::domain_error("test function tail mass above threshold");
}

} // namespace detail

// |integral of f (L_h g) + integral of (L_h f) g| over the (q1, p1) plane.
// Vanishes analytically for every bracket theory (integration by parts);
// the return value is the quadrature-level residual.
inline double adjointness_check(const PhaseExpr& h, const GaussTestFn& f,
                                const GaussTestFn& g, const BracketSpec& spec,
                                double tol = 1e-12) {
    if (f.inv_w2 <= 0 || g.inv_w2 <= 0)
        throw std::domain_error("test functions must decay (inv_w2 > 0)");
    double wmax = 1.0 / std::sqrt(std::min(static_cast<double>(f.inv_w2),
                                           static_cast<double>(g.inv_w2)));
    double L = 12.0 * wmax;
    detail::check_tail_decay(f, L);
    detail::check_tail_decay(g, L);
    GaussTestFn lg = detail::liouville_action(h, g, spec);
    GaussTestFn lf = detail::liouville_action(h, f, spec);

    auto plane_integral = [&](const GaussTestFn& u, const GaussTestFn& v) {
        auto integrand = [&](double q, double p) {
            return detail::gauss_eval(u, q, p) * detail::gauss_eval(v, q, p);
        };
        return gk_2d(integrand, -L, L, {0.0},
                     [&](double) { return std::vector<double>{-L, 0.0, L}; }, tol).value;
    };
    return std::abs(plane_integral(f, lg) + plane_integral(lf, g));
}

} // namespace gphase
