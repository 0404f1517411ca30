#include "rwspt/ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <ostream>
#include <string>
#include <vector>

#include "rwspt/errors.hpp"
#include "rwspt/netio.hpp"

namespace rwspt {

namespace {

void validate(const LumpedCTMC& c, const std::vector<double>& times, double epsilon) {
    if (c.n == 0) throw ValidationError("transient analysis needs a nonempty chain");
    if (c.initialDistribution.size() != c.n || c.diag.size() != c.n || c.rows.size() != c.n ||
        c.labeledOut.size() != c.n)
        throw ValidationError("chain field sizes disagree");
    if (!(epsilon > 0) || !(epsilon < 1)) throw ValidationError("epsilon must be in (0, 1)");
    double prev = 0;
    for (double t : times) {
        if (!(t >= prev)) throw ValidationError("times must be nonnegative and nondecreasing");
        prev = t;
    }
}

// P = I + Q/Lambda, stored transposed: per target, (source, probability) with
// sources ascending. The fixed entry order makes the products deterministic.
struct Pt {
    std::vector<std::size_t> start; // n+1
    std::vector<std::size_t> src;
    std::vector<double> val;
};

Pt buildPt(const LumpedCTMC& c, double lambda) {
    const std::size_t n = c.n;
    std::vector<std::size_t> count(n, 1); // the diagonal entry
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [dst, rate] : c.rows[i]) ++count[dst];
    Pt p;
    p.start.assign(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j) p.start[j + 1] = p.start[j] + count[j];
    p.src.resize(p.start[n]);
    p.val.resize(p.start[n]);
    std::vector<std::size_t> cursor(p.start.begin(), p.start.end() - 1);
    for (std::size_t i = 0; i < n; ++i) {
        p.src[cursor[i]] = i;
        p.val[cursor[i]] = 1.0 + c.diag[i] / lambda;
        ++cursor[i];
        for (const auto& [dst, rate] : c.rows[i]) {
            p.src[cursor[dst]] = i;
            p.val[cursor[dst]] = rate / lambda;
            ++cursor[dst];
        }
    }
    return p;
}

void stepInto(const Pt& p, const std::vector<double>& v, std::vector<double>& out, int threads) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#if RWSPT_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
#endif
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        double sum = 0;
        const std::size_t uj = static_cast<std::size_t>(j);
        for (std::size_t e = p.start[uj]; e < p.start[uj + 1]; ++e) sum += p.val[e] * v[p.src[e]];
        out[uj] = sum;
    }
#if !RWSPT_HAVE_OPENMP
    (void)threads;
#endif
}

// Poisson(nu) weights over a window [left, left+size), renormalized to sum
// to 1 after both tails (each <= epsilon/2 of the raw mass) are dropped.
struct Window {
    std::uint64_t left = 0;
    std::vector<double> w;
};

Window poissonWindow(double nu, double epsilon) {
    Window win;
    if (nu <= 0) {
        win.w.push_back(1.0);
        return win;
    }
    const std::uint64_t mode = static_cast<std::uint64_t>(nu);
    std::deque<double> terms{1.0}; // scaled so the mode term is 1
    std::uint64_t left = mode;
    double term = 1.0;
    for (std::uint64_t k = mode; k-- > 0;) {
        term *= static_cast<double>(k + 1) / nu;
        if (term < 1e-18) break;
        terms.push_front(term);
        left = k;
    }
    term = 1.0;
    for (std::uint64_t k = mode + 1;; ++k) {
        term *= nu / static_cast<double>(k);
        if (term < 1e-18) break;
        terms.push_back(term);
    }
    double total = 0;
    for (double t : terms) total += t;
    const double tailBudget = 0.5 * epsilon * total;
    double dropped = 0;
    while (terms.size() > 1 && dropped + terms.front() <= tailBudget) {
        dropped += terms.front();
        terms.pop_front();
        ++left;
    }
    dropped = 0;
    while (terms.size() > 1 && dropped + terms.back() <= tailBudget) {
        dropped += terms.back();
        terms.pop_back();
    }
    double kept = 0;
    for (double t : terms) kept += t;
    win.left = left;
    win.w.assign(terms.begin(), terms.end());
    for (double& t : win.w) t /= kept;
    return win;
}

} // namespace

TransientResult transient(const LumpedCTMC& c, const std::vector<double>& times, double epsilon,
                          int threads) {
    validate(c, times, epsilon);
    threads = std::max(1, threads);

    double maxExit = 0;
    for (double d : c.diag) maxExit = std::max(maxExit, std::abs(d));

    TransientResult res;
    res.timePoints = times;
    res.distributions.reserve(times.size());

    if (maxExit == 0) { // no transitions anywhere: pi(t) = pi(0)
        for (std::size_t k = 0; k < times.size(); ++k)
            res.distributions.push_back(c.initialDistribution);
        return res;
    }

    const double lambda = 1.02 * maxExit;
    const Pt p = buildPt(c, lambda);

    std::vector<double> v(c.n), next(c.n), acc(c.n);
    for (double t : times) {
        if (t == 0) {
            res.distributions.push_back(c.initialDistribution);
            continue;
        }
        const Window win = poissonWindow(lambda * t, epsilon);
        v = c.initialDistribution;
        std::fill(acc.begin(), acc.end(), 0.0);
        const std::uint64_t last = win.left + win.w.size() - 1;
        for (std::uint64_t k = 0;; ++k) {
            if (k >= win.left) {
                const double wk = win.w[static_cast<std::size_t>(k - win.left)];
                for (std::size_t i = 0; i < c.n; ++i) acc[i] += wk * v[i];
            }
            if (k == last) break;
            stepInto(p, v, next, threads);
            v.swap(next);
        }
        res.distributions.push_back(acc);
    }
    return res;
}

Curve reliability(const LumpedCTMC& c, const std::vector<double>& times, double epsilon,
                  int threads) {
    const TransientResult r = transient(c, times, epsilon, threads);
    Curve out;
    out.reserve(times.size());
    for (std::size_t k = 0; k < r.timePoints.size(); ++k) {
        double absorbed = 0;
        for (std::size_t i = 0; i < c.n; ++i)
            if (c.rows[i].empty()) absorbed += r.distributions[k][i];
        out.emplace_back(r.timePoints[k], 1.0 - absorbed);
    }
    return out;
}

Curve throughput(const LumpedCTMC& c, const std::function<bool(const std::string&)>& labelFilter,
                 const std::vector<double>& times, double epsilon, int threads) {
    const TransientResult r = transient(c, times, epsilon, threads);
    std::vector<double> weight(c.n, 0.0);
    for (std::size_t i = 0; i < c.n; ++i)
        for (const auto& [label, rate] : c.labeledOut[i])
            if (labelFilter(label)) weight[i] += rate;
    Curve out;
    out.reserve(times.size());
    for (std::size_t k = 0; k < r.timePoints.size(); ++k) {
        double sum = 0;
        for (std::size_t i = 0; i < c.n; ++i) sum += r.distributions[k][i] * weight[i];
        out.emplace_back(r.timePoints[k], sum);
    }
    return out;
}

std::vector<double> timeGrid(double t0, double t1, std::size_t count, bool geometric) {
    if (count == 0) throw ValidationError("time grid needs at least one point");
    if (!(t0 >= 0) || !(t1 >= t0)) throw ValidationError("time grid bounds must satisfy 0 <= t0 <= t1");
    if (geometric && !(t0 > 0)) throw ValidationError("geometric time grid needs t0 > 0");
    std::vector<double> out;
    out.reserve(count);
    if (count == 1) {
        out.push_back(t0);
        return out;
    }
    for (std::size_t k = 0; k < count; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(count - 1);
        out.push_back(geometric ? t0 * std::pow(t1 / t0, f) : t0 + (t1 - t0) * f);
    }
    out.back() = t1; // guard against rounding at the endpoint
    return out;
}

void writeGeneratorCsv(std::ostream& os, const LumpedCTMC& c) {
    os << "source,target,rate\n";
    for (std::size_t i = 0; i < c.n; ++i) {
        bool diagDone = false;
        for (const auto& [dst, rate] : c.rows[i]) {
            if (!diagDone && dst > i) {
                os << i << ',' << i << ',' << doubleText(c.diag[i]) << '\n';
                diagDone = true;
            }
            os << i << ',' << dst << ',' << doubleText(rate) << '\n';
        }
        if (!diagDone) os << i << ',' << i << ',' << doubleText(c.diag[i]) << '\n';
    }
}

void writeTransientCsv(std::ostream& os, const TransientResult& r) {
    os << 't';
    const std::size_t n = r.distributions.empty() ? 0 : r.distributions.front().size();
    for (std::size_t i = 0; i < n; ++i) os << ",state_" << i;
    os << '\n';
    for (std::size_t k = 0; k < r.timePoints.size(); ++k) {
        os << doubleText(r.timePoints[k]);
        for (double x : r.distributions[k]) os << ',' << doubleText(x);
        os << '\n';
    }
}

void writeCurveCsv(std::ostream& os, const Curve& c) {
    os << "t,value\n";
    for (const auto& [t, v] : c) os << doubleText(t) << ',' << doubleText(v) << '\n';
}

} // namespace rwspt
