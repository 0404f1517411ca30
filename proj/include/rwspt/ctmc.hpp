#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rwspt {

// Lumped CTMC generator in sparse row form. Self-loop rates are dropped at
// assembly (they do not affect the chain's law), so an absorbing state is
// exactly one with an empty row.
struct LumpedCTMC {
    std::size_t n = 0;
    std::vector<double> initialDistribution;
    std::vector<double> diag;                                   // -(row sum)
    std::vector<std::vector<std::pair<std::size_t, double>>> rows; // off-diag, target ascending
    std::vector<std::map<std::string, double>> labeledOut;      // per state, self-loops excluded
    std::vector<std::string> stateKeys; // canonical system keys, aligned with the quotient TS
};

struct TransientResult {
    std::vector<double> timePoints;
    std::vector<std::vector<double>> distributions; // one probability vector per time point
};

using Curve = std::vector<std::pair<double, double>>;

// pi(t) = pi(0) exp(Qt) by uniformization: rate 1.02 * max |Q_ii|, Poisson
// window truncated to tail mass <= epsilon and renormalized. Every time
// point is evaluated independently from pi(0). `threads` parallelizes the
// vector-matrix products with a fixed reduction order, so results are
// bit-identical to the serial path.
TransientResult transient(const LumpedCTMC& c, const std::vector<double>& times,
                          double epsilon = 1e-10, int threads = 1);

// 1 - (probability mass in absorbing states) per time point.
Curve reliability(const LumpedCTMC& c, const std::vector<double>& times, double epsilon = 1e-10,
                  int threads = 1);

// Expected instantaneous rate of activities whose edge label passes the
// filter: sum_i pi_i(t) * (matching out-rates of i).
Curve throughput(const LumpedCTMC& c, const std::function<bool(const std::string&)>& labelFilter,
                 const std::vector<double>& times, double epsilon = 1e-10, int threads = 1);

std::vector<double> timeGrid(double t0, double t1, std::size_t count, bool geometric = false);

void writeGeneratorCsv(std::ostream& os, const LumpedCTMC& c);
void writeTransientCsv(std::ostream& os, const TransientResult& r);
void writeCurveCsv(std::ostream& os, const Curve& c);

} // namespace rwspt
