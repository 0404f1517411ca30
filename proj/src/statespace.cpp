#include "rwspt/statespace.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <unordered_map>
#include <utility>

#include "rwspt/canon.hpp"
#include "rwspt/netio.hpp"
#include "rwspt/symmetry.hpp"

namespace rwspt {

std::size_t TransitionSystem::finalCount() const {
    std::size_t n = 0;
    for (bool f : finalFlag) n += f ? 1 : 0;
    return n;
}

std::string TransitionSystem::fullKey(std::size_t i) const {
    std::string out = netKeys[stateNet[i]];
    out.push_back('\x07');
    out.append(stateMarkingKey[i]);
    return out;
}

namespace {

struct Pending {
    System target;
    std::string label;
    double rate = 0;
};

using Expander = std::function<std::vector<Pending>(const System&)>;

// Composite state identity for hashing: interned net id + marking key. The
// full net key is only consulted when ordering newly discovered states.
std::string idOf(std::size_t netId, const std::string& mkey) {
    std::string id;
    detail::appendDec(id, netId, 8);
    id.push_back('\x07');
    id.append(mkey);
    return id;
}

// Level-synchronous BFS. Frontier expansion may run on several threads; the
// merge is serial and in slot order, so the result is schedule-independent.
TransitionSystem explore(const System& s0, const Expander& expand, const ExploreOptions& opt) {
    const auto startTime = std::chrono::steady_clock::now();
    const int threads = std::max(1, opt.threads);

    TransitionSystem ts;
    std::unordered_map<std::string, std::size_t> netIndex;   // net key -> netKeys pos
    std::unordered_map<std::string, std::size_t> stateIndex; // idOf -> state

    const auto internNet = [&](const std::string& key) {
        const auto it = netIndex.find(key);
        if (it != netIndex.end()) return it->second;
        ts.netKeys.push_back(key);
        return netIndex.emplace(key, ts.netKeys.size() - 1).first->second;
    };

    const auto finalize = [&] {
        std::vector<bool> hasOut(ts.states.size(), false);
        for (const Edge& e : ts.edges) hasOut[e.src] = true;
        ts.finalFlag.resize(ts.states.size());
        for (std::size_t i = 0; i < ts.states.size(); ++i) ts.finalFlag[i] = !hasOut[i];
    };

    const auto abortWith = [&](const std::string& what, bool wall) {
        finalize();
        auto partial = std::make_shared<TransitionSystem>(std::move(ts));
        throw StateLimitError(what, std::move(partial), wall);
    };

    {
        const std::size_t net0 = internNet(s0.net().canonicalKey());
        std::string mk0 = bagKey(s0.marking());
        stateIndex.emplace(idOf(net0, mk0), 0);
        ts.states.push_back(s0);
        ts.stateNet.push_back(net0);
        ts.stateMarkingKey.push_back(std::move(mk0));
    }

    std::vector<std::size_t> frontier{0};
    while (!frontier.empty()) {
        if (opt.wallBudgetSec > 0) {
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - startTime).count();
            if (elapsed > opt.wallBudgetSec)
                abortWith("wall-clock budget exceeded with " + std::to_string(ts.states.size()) +
                              " states explored",
                          true);
        }

        std::vector<std::vector<Pending>> results(frontier.size());
        std::exception_ptr firstError;
        std::mutex errorMutex;
#if RWSPT_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads) if (threads > 1)
#endif
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(frontier.size()); ++k) {
            const std::size_t uk = static_cast<std::size_t>(k);
            try {
                results[uk] = expand(ts.states[frontier[uk]]);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(errorMutex);
                if (!firstError) firstError = std::current_exception();
            }
        }
        if (firstError) std::rethrow_exception(firstError);
#if !RWSPT_HAVE_OPENMP
        (void)threads;
#endif

        struct Fresh {
            std::size_t netId;
            std::string mkey;
            System sys;
        };
        struct TmpEdge {
            std::size_t src;
            std::size_t dst; // state index, or position in `fresh`
            bool isFresh;
            std::string label;
            double rate;
        };
        std::vector<Fresh> fresh;
        std::unordered_map<std::string, std::size_t> freshIndex;
        std::vector<TmpEdge> tmpEdges;

        for (std::size_t k = 0; k < frontier.size(); ++k) {
            const std::size_t src = frontier[k];
            for (Pending& p : results[k]) {
                const std::size_t netId = internNet(p.target.net().canonicalKey());
                std::string mkey = bagKey(p.target.marking());
                std::string id = idOf(netId, mkey);
                std::size_t dst;
                bool isFresh = false;
                if (const auto it = stateIndex.find(id); it != stateIndex.end()) {
                    dst = it->second;
                } else if (const auto jt = freshIndex.find(id); jt != freshIndex.end()) {
                    dst = jt->second;
                    isFresh = true;
                } else {
                    dst = fresh.size();
                    isFresh = true;
                    freshIndex.emplace(std::move(id), dst);
                    fresh.push_back(Fresh{netId, std::move(mkey), std::move(p.target)});
                }
                tmpEdges.push_back(TmpEdge{src, dst, isFresh, std::move(p.label), p.rate});
            }
        }

        // Number the level: new states sorted by (net key, marking key).
        std::vector<std::size_t> perm(fresh.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
            const Fresh& fa = fresh[a];
            const Fresh& fb = fresh[b];
            if (fa.netId != fb.netId) return ts.netKeys[fa.netId] < ts.netKeys[fb.netId];
            return fa.mkey < fb.mkey;
        });
        const std::size_t base = ts.states.size();
        std::vector<std::size_t> newIndex(fresh.size());
        for (std::size_t r = 0; r < perm.size(); ++r) newIndex[perm[r]] = base + r;

        std::vector<std::size_t> next;
        next.reserve(fresh.size());
        for (std::size_t r = 0; r < perm.size(); ++r) {
            Fresh& f = fresh[perm[r]];
            stateIndex.emplace(idOf(f.netId, f.mkey), base + r);
            ts.states.push_back(std::move(f.sys));
            ts.stateNet.push_back(f.netId);
            ts.stateMarkingKey.push_back(std::move(f.mkey));
            next.push_back(base + r);
        }
        for (TmpEdge& e : tmpEdges)
            ts.edges.push_back(
                Edge{e.src, e.isFresh ? newIndex[e.dst] : e.dst, std::move(e.label), e.rate});

        if (opt.stateLimit > 0 && ts.states.size() > opt.stateLimit)
            abortWith("state limit exceeded: " + std::to_string(ts.states.size()) +
                          " states reached (limit " + std::to_string(opt.stateLimit) + ")",
                      false);
        frontier = std::move(next);
    }
    finalize();
    return ts;
}

LumpedCTMC assembleChain(const TransitionSystem& ts) {
    LumpedCTMC c;
    c.n = ts.states.size();
    c.initialDistribution.assign(c.n, 0.0);
    if (c.n > 0) c.initialDistribution[ts.initial] = 1.0;
    c.diag.assign(c.n, 0.0);
    c.rows.resize(c.n);
    c.labeledOut.resize(c.n);
    c.stateKeys.reserve(c.n);
    for (std::size_t i = 0; i < c.n; ++i) c.stateKeys.push_back(ts.fullKey(i));

    std::vector<std::map<std::size_t, double>> acc(c.n);
    for (const Edge& e : ts.edges) {
        if (e.dst == e.src) continue; // self-loops do not affect the law
        acc[e.src][e.dst] += e.rate;
        c.labeledOut[e.src][e.label] += e.rate;
    }
    for (std::size_t i = 0; i < c.n; ++i) {
        c.rows[i].reserve(acc[i].size());
        for (const auto& [dst, rate] : acc[i]) {
            c.rows[i].emplace_back(dst, rate);
            c.diag[i] -= rate;
        }
    }
    return c;
}

} // namespace

TransitionSystem buildOrdinary(const System& s0, const std::vector<Rule>& rules,
                               const ExploreOptions& opt) {
    const Expander expand = [&rules](const System& s) {
        std::vector<Pending> out;
        for (const Rule& r : rules)
            for (const Match& m : r.matcher(s))
                out.push_back(Pending{r.transformer(s, m), matchLabel(r, s, m), matchRate(r, s, m)});
        return out;
    };
    return explore(s0, expand, opt);
}

QuotientResult buildQuotient(const System& s0, const std::vector<Rule>& rules,
                             const ExploreOptions& opt) {
    const Expander expand = [&rules](const System& s) {
        std::vector<Pending> out;
        std::vector<SuccessorEntry> dist = successorDistribution(s, rules);
        for (SuccessorEntry& e : dist)
            for (const auto& [label, rate] : e.labelRates)
                out.push_back(Pending{e.target, label, rate});
        return out;
    };
    QuotientResult qr;
    qr.ts = explore(normalize(s0), expand, opt);
    qr.chain = assembleChain(qr.ts);
    return qr;
}

LumpingReport verifyLumping(const TransitionSystem& ordinary, const LumpedCTMC& chain) {
    std::unordered_map<std::string, std::size_t> classOf;
    classOf.reserve(chain.n);
    for (std::size_t i = 0; i < chain.n; ++i) classOf.emplace(chain.stateKeys[i], i);

    std::vector<std::size_t> cls(ordinary.states.size());
    for (std::size_t i = 0; i < ordinary.states.size(); ++i) {
        const auto it = classOf.find(sysKey(normalize(ordinary.states[i])));
        if (it == classOf.end())
            throw ValidationError("partition mismatch: ordinary state " + std::to_string(i) +
                                  " normalizes outside the quotient");
        cls[i] = it->second;
    }

    std::vector<std::map<std::size_t, double>> out(ordinary.states.size());
    for (const Edge& e : ordinary.edges) {
        const std::size_t cj = cls[e.dst];
        if (cj == cls[e.src]) continue; // within-class rates are unconstrained
        out[e.src][cj] += e.rate;
    }

    LumpingReport rep;
    rep.statesChecked = ordinary.states.size();
    for (std::size_t i = 0; i < ordinary.states.size(); ++i) {
        const std::size_t ci = cls[i];
        std::map<std::size_t, std::pair<double, double>> cmp; // class -> (actual, prescribed)
        for (const auto& [cj, rate] : out[i]) cmp[cj].first = rate;
        for (const auto& [dst, rate] : chain.rows[ci]) cmp[dst].second = rate;
        for (const auto& [cj, pr] : cmp) {
            const double diff = std::abs(pr.first - pr.second);
            if (diff > 1e-9 * std::max(std::abs(pr.first), std::abs(pr.second)))
                rep.violations.push_back(LumpingViolation{i, ci, cj, pr.first, pr.second});
        }
    }
    return rep;
}

namespace {

std::string dotEscape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out.push_back('\\');
        out.push_back(ch);
    }
    return out;
}

std::string csvQuote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

} // namespace

std::string exportDot(const TransitionSystem& ts) {
    std::string out = "digraph ts {\n  rankdir=LR;\n  node [shape=ellipse];\n";
    for (std::size_t i = 0; i < ts.states.size(); ++i) {
        out += "  s" + std::to_string(i) + " [label=\"" +
               dotEscape(std::to_string(i) + ": " + bagText(ts.states[i].marking())) + "\"";
        if (ts.finalFlag[i]) out += ", peripheries=2";
        out += "];\n";
    }
    for (const Edge& e : ts.edges)
        out += "  s" + std::to_string(e.src) + " -> s" + std::to_string(e.dst) + " [label=\"" +
               dotEscape(e.label + "/" + doubleText(e.rate)) + "\"];\n";
    out += "}\n";
    return out;
}

void writeStatesCsv(std::ostream& os, const TransitionSystem& ts) {
    os << "index,serialized_state,is_final\n";
    for (std::size_t i = 0; i < ts.states.size(); ++i)
        os << i << ',' << csvQuote(serializeSystem(ts.states[i])) << ','
           << (ts.finalFlag[i] ? 1 : 0) << '\n';
}

void writeEdgesCsv(std::ostream& os, const TransitionSystem& ts) {
    os << "source,target,label,rate\n";
    for (const Edge& e : ts.edges)
        os << e.src << ',' << e.dst << ',' << csvQuote(e.label) << ',' << doubleText(e.rate)
           << '\n';
}

} // namespace rwspt
