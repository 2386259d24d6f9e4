#pragma once
// Exact symbolic ring for phase-space observables in up to three degrees of
// freedom.  Every expression is kept in the canonical form
//
//     (A(q,p) + B(q,p) * r) / Q^k,    Q = q1^2 + q2^2 + q3^2,  r = sqrt(Q),
//
// where A and B are polynomials with exact rational coefficients and with
// formal scalar parameters (hbar, m, omega, coupling symbols, ...) carried
// as monomial factors with integer exponents.  r never appears squared
// (r^2 folds into Q), k is kept minimal by exact polynomial division, and
// terms live in an ordered map, so an expression is zero iff its term set
// is empty and structural equality is semantic equality.  The ring is
// closed under +, *, d/dq_i and d/dp_i, which is everything the bracket
// engine needs.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace gphase {

using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& x) { return x.str(); }

// One product of variables: q-exponents, p-exponents, an optional single
// factor of r, and the formal parameter exponents (integers, may be
// negative).  Ordering is lexicographic over the members; the map keyed on
// Monomial is therefore canonical.
struct Monomial {
    std::array<int, 3> qe{0, 0, 0};
    std::array<int, 3> pe{0, 0, 0};
    int rodd = 0;                                    // 0 or 1
    std::vector<std::pair<std::string, int>> params; // sorted, exps nonzero

    friend auto operator<=>(const Monomial&, const Monomial&) = default;

    int qdeg() const { return qe[0] + qe[1] + qe[2]; }
    int pdeg() const { return pe[0] + pe[1] + pe[2]; }
};

inline Monomial merge_params(Monomial a, const Monomial& b) {
    for (int i = 0; i < 3; ++i) { a.qe[i] += b.qe[i]; a.pe[i] += b.pe[i]; }
    std::vector<std::pair<std::string, int>> out;
    auto ia = a.params.cbegin();
    auto ib = b.params.cbegin();
    while (ia != a.params.end() || ib != b.params.end()) {
        if (ib == b.params.end() || (ia != a.params.end() && ia->first < ib->first))
            out.push_back(*ia++);
        else if (ia == a.params.end() || ib->first < ia->first)
            out.push_back(*ib++);
        else {
            int e = ia->second + ib->second;
            if (e != 0) out.emplace_back(ia->first, e);
            ++ia; ++ib;
        }
    }
    a.params = std::move(out);
    return a; // rodd handled by caller
}

class PhaseExpr {
public:
    using TermMap = std::map<Monomial, Rational>;

    PhaseExpr() = default;

    static PhaseExpr rational(Rational c) {
        PhaseExpr e;
        if (c != 0) e.terms_[Monomial{}] = std::move(c);
        return e;
    }
    static PhaseExpr integer(long long n) { return rational(Rational(n)); }

    static PhaseExpr q(int i) {
        check_axis(i);
        Monomial m; m.qe[i - 1] = 1;
        return from_term(m, 1);
    }
    static PhaseExpr p(int i) {
        check_axis(i);
        Monomial m; m.pe[i - 1] = 1;
        return from_term(m, 1);
    }
    static PhaseExpr param(const std::string& name, int exp = 1) {
        if (name.empty()) throw std::invalid_argument("empty parameter name");
        Monomial m;
        if (exp != 0) m.params.emplace_back(name, exp);
        return from_term(m, 1);
    }
    // Q = q1^2+q2^2+q3^2 as a polynomial
    static PhaseExpr Qpoly() {
        PhaseExpr e;
        for (int i = 0; i < 3; ++i) {
            Monomial m; m.qe[i] = 2;
            e.terms_[m] = 1;
        }
        return e;
    }
    // r^e for any integer e, normalized into the canonical form
    static PhaseExpr r_power(int e) {
        PhaseExpr out = rational(1);
        int odd = ((e % 2) + 2) % 2;
        int half = (e - odd) / 2; // r^e = r^odd * Q^half, half may be negative
        if (odd) {
            Monomial m; m.rodd = 1;
            out = from_term(m, 1);
        }
        if (half > 0) {
            PhaseExpr qp = Qpoly();
            for (int j = 0; j < half; ++j) out = out * qp;
        } else if (half < 0) {
            out.qden_ = static_cast<unsigned>(-half);
        }
        return out;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_polynomial() const {
        if (qden_ != 0) return false;
        for (const auto& [m, c] : terms_)
            if (m.rodd) return false;
        return true;
    }
    // max total degree in q and p combined; only meaningful for polynomials
    int total_degree() const {
        if (!is_polynomial())
            throw std::logic_error("total_degree on non-polynomial expression");
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.qdeg() + m.pdeg());
        return d;
    }
    std::size_t term_count() const { return terms_.size(); }
    unsigned qden() const { return qden_; }
    const TermMap& terms() const { return terms_; }

    Rational coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    friend PhaseExpr operator+(const PhaseExpr& a, const PhaseExpr& b) {
        PhaseExpr out;
        unsigned k = std::max(a.qden_, b.qden_);
        out.qden_ = k;
        out.terms_ = a.promoted_terms(k - a.qden_);
        for (auto& [m, c] : b.promoted_terms(k - b.qden_)) add_term(out.terms_, m, c);
        out.reduce();
        return out;
    }
    friend PhaseExpr operator-(const PhaseExpr& a) {
        PhaseExpr out = a;
        for (auto& [m, c] : out.terms_) c = -c;
        return out;
    }
    friend PhaseExpr operator-(const PhaseExpr& a, const PhaseExpr& b) { return a + (-b); }

    friend PhaseExpr operator*(const PhaseExpr& a, const PhaseExpr& b) {
        PhaseExpr out;
        out.qden_ = a.qden_ + b.qden_;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                mul_term_into(out.terms_, ma, ca, mb, cb);
        out.reduce();
        return out;
    }
    friend PhaseExpr operator*(const Rational& c, const PhaseExpr& a) {
        if (c == 0) return {};
        PhaseExpr out = a;
        for (auto& [m, v] : out.terms_) v *= c;
        return out;
    }
    friend PhaseExpr operator*(const PhaseExpr& a, const Rational& c) { return c * a; }

    PhaseExpr& operator+=(const PhaseExpr& b) { *this = *this + b; return *this; }
    PhaseExpr& operator-=(const PhaseExpr& b) { *this = *this - b; return *this; }
    PhaseExpr& operator*=(const PhaseExpr& b) { *this = *this * b; return *this; }

    friend bool operator==(const PhaseExpr& a, const PhaseExpr& b) {
        return a.qden_ == b.qden_ && a.terms_ == b.terms_;
    }

    PhaseExpr pow(int e) const {
        if (e < 0) throw std::invalid_argument("negative power of an expression");
        PhaseExpr out = rational(1);
        for (int j = 0; j < e; ++j) out = out * (*this);
        return out;
    }

    // d/dq_i.  With E = (A + B r) Q^-k:
    //   dE/dq_i = [ Q dA + Q dB r - 2k q_i (A + B r) + q_i B r ] Q^-(k+1)
    PhaseExpr dq(int i) const {
        check_axis(i);
        int ax = i - 1;
        PhaseExpr out;
        out.qden_ = qden_ + 1;
        const PhaseExpr Qp = Qpoly();
        for (const auto& [m, c] : terms_) {
            // polynomial derivative of the monomial, times Q
            if (m.qe[ax] > 0) {
                Monomial d = m;
                d.qe[ax] -= 1;
                Rational cc = c * m.qe[ax];
                for (const auto& [mq, cq] : Qp.terms_)
                    mul_term_into(out.terms_, d, cc, mq, cq);
            }
            // -2k q_i times the term
            if (qden_ > 0) {
                Monomial d = m;
                d.qe[ax] += 1;
                add_term(out.terms_, d, c * Rational(-2) * Rational(qden_));
            }
            // r-chain: d r/dq_i = q_i / r, so B r gains q_i B r / Q
            if (m.rodd) {
                Monomial d = m;
                d.qe[ax] += 1;
                add_term(out.terms_, d, c);
            }
        }
        out.reduce();
        return out;
    }

    PhaseExpr dp(int i) const {
        check_axis(i);
        int ax = i - 1;
        PhaseExpr out;
        out.qden_ = qden_;
        for (const auto& [m, c] : terms_) {
            if (m.pe[ax] > 0) {
                Monomial d = m;
                d.pe[ax] -= 1;
                add_term(out.terms_, d, c * m.pe[ax]);
            }
        }
        out.reduce();
        return out;
    }

    // substitute a rational value for a formal parameter
    PhaseExpr subst_param(const std::string& name, const Rational& value) const {
        PhaseExpr out;
        out.qden_ = qden_;
        for (const auto& [m, c] : terms_) {
            Monomial d = m;
            Rational cc = c;
            auto it = std::find_if(d.params.begin(), d.params.end(),
                                   [&](const auto& pr) { return pr.first == name; });
            if (it != d.params.end()) {
                int e = it->second;
                d.params.erase(it);
                if (value == 0) {
                    if (e < 0) throw std::domain_error("zero substituted into negative power");
                    continue; // term vanishes
                }
                if (e >= 0)
                    for (int j = 0; j < e; ++j) cc *= value;
                else
                    for (int j = 0; j < -e; ++j) cc /= value;
            }
            add_term(out.terms_, d, cc);
        }
        out.reduce();
        return out;
    }

    double evaluate(const std::array<double, 3>& qv, const std::array<double, 3>& pv,
                    const std::map<std::string, double>& pars = {}) const {
        double Q = qv[0] * qv[0] + qv[1] * qv[1] + qv[2] * qv[2];
        if (Q == 0.0 && qden_ > 0)
            throw std::domain_error("singular point: |q| = 0 with a negative r power");
        double r = std::sqrt(Q);
        double acc = 0.0;
        for (const auto& [m, c] : terms_) {
            double t = static_cast<double>(c);
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < m.qe[i]; ++j) t *= qv[i];
                for (int j = 0; j < m.pe[i]; ++j) t *= pv[i];
            }
            if (m.rodd) t *= r;
            for (const auto& [name, e] : m.params) {
                auto it = pars.find(name);
                if (it == pars.end())
                    throw std::invalid_argument("no value for parameter '" + name + "'");
                t *= std::pow(it->second, e);
            }
            acc += t;
        }
        if (qden_ > 0) acc /= std::pow(Q, static_cast<double>(qden_));
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string body;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            Rational a = c;
            if (first) {
                if (a < 0) { body += "-"; a = -a; }
            } else {
                body += (a < 0) ? " - " : " + ";
                if (a < 0) a = -a;
            }
            first = false;
            std::string factors = monomial_str(m);
            if (factors.empty())
                body += to_string(a);
            else if (a == 1)
                body += factors;
            else
                body += to_string(a) + "*" + factors;
        }
        if (qden_ == 0) return body;
        return "(" + body + ")*Q^-" + std::to_string(qden_);
    }

private:
    TermMap terms_;
    unsigned qden_ = 0;

    static void check_axis(int i) {
        if (i < 1 || i > 3) throw std::invalid_argument("axis index must be 1..3");
    }
    static PhaseExpr from_term(const Monomial& m, Rational c) {
        PhaseExpr e;
        if (c != 0) e.terms_[m] = std::move(c);
        return e;
    }
    static void add_term(TermMap& tm, const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = tm.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) tm.erase(it);
        }
    }
    // multiply two terms; r*r expands into Q's three monomials
    static void mul_term_into(TermMap& out, const Monomial& ma, const Rational& ca,
                              const Monomial& mb, const Rational& cb) {
        Monomial m = merge_params(ma, mb);
        Rational c = ca * cb;
        int rsum = ma.rodd + mb.rodd;
        if (rsum < 2) {
            m.rodd = rsum;
            add_term(out, m, c);
        } else {
            m.rodd = 0;
            for (int i = 0; i < 3; ++i) {
                Monomial mq = m;
                mq.qe[i] += 2;
                add_term(out, mq, c);
            }
        }
    }

    TermMap promoted_terms(unsigned extra) const {
        if (extra == 0) return terms_;
        TermMap cur = terms_;
        const PhaseExpr Qp = Qpoly();
        for (unsigned j = 0; j < extra; ++j) {
            TermMap next;
            for (const auto& [m, c] : cur)
                for (const auto& [mq, cq] : Qp.terms_)
                    mul_term_into(next, m, c, mq, cq);
            cur = std::move(next);
        }
        return cur;
    }

    // exact division of the term set by Q; {Q} is monic in q1^2 under lex
    // order, so a zero remainder is equivalent to divisibility
    static bool try_divide_by_Q(TermMap& terms) {
        TermMap work = terms, quot;
        while (true) {
            auto it = work.end();
            for (auto jt = work.begin(); jt != work.end(); ++jt)
                if (jt->first.qe[0] >= 2) { it = jt; break; }
            if (it == work.end()) break;
            Monomial qm = it->first;
            qm.qe[0] -= 2;
            Rational qc = it->second;
            add_term(quot, qm, qc);
            work.erase(it);
            for (int i = 1; i < 3; ++i) {
                Monomial sub = qm;
                sub.qe[i] += 2;
                add_term(work, sub, -qc);
            }
        }
        if (!work.empty()) return false;
        terms = std::move(quot);
        return true;
    }

    void reduce() {
        while (qden_ > 0) {
            TermMap attempt = terms_;
            if (!try_divide_by_Q(attempt)) break;
            terms_ = std::move(attempt);
            --qden_;
        }
        if (terms_.empty()) qden_ = 0;
    }

    static std::string monomial_str(const Monomial& m) {
        std::string s;
        auto app = [&s](const std::string& v, int e) {
            if (e == 0) return;
            if (!s.empty()) s += "*";
            s += v;
            if (e != 1) s += "^" + std::to_string(e);
        };
        for (const auto& [name, e] : m.params) app(name, e);
        for (int i = 0; i < 3; ++i) app("q" + std::to_string(i + 1), m.qe[i]);
        for (int i = 0; i < 3; ++i) app("p" + std::to_string(i + 1), m.pe[i]);
        if (m.rodd) app("r", 1);
        return s;
    }
};

} // namespace gphase
