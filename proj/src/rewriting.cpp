#include "rwspt/rewriting.hpp"

#include <utility>

#include "rwspt/canon.hpp"
#include "rwspt/errors.hpp"
#include "rwspt/symmetry.hpp"

namespace rwspt {

Rule firingRule() {
    Rule r;
    r.name = "firing";
    r.rate = std::nullopt; // per-transition rates
    r.matcher = [](const System& s) {
        std::vector<Match> out;
        for (std::size_t i : enabledIndices(s)) {
            Match m;
            m.witness = "t:" + std::to_string(i);
            m.tranIndex = i;
            out.push_back(std::move(m));
        }
        return out;
    };
    r.transformer = [](const System& s, const Match& m) { return fireAt(s, m.tranIndex); };
    return r;
}

std::vector<Match> matches(const Rule& r, const System& s) { return r.matcher(s); }

System apply(const Rule& r, const System& s, const Match& m) { return r.transformer(s, m); }

double matchRate(const Rule& r, const System& s, const Match& m) {
    if (r.rate) return *r.rate;
    if (m.tranIndex >= s.net().transitions().size())
        throw ValidationError("match does not identify a transition");
    return s.net().transitions()[m.tranIndex].rate;
}

std::string matchLabel(const Rule& r, const System& s, const Match& m) {
    if (r.rate) return r.name;
    if (m.tranIndex >= s.net().transitions().size())
        throw ValidationError("match does not identify a transition");
    return s.net().transitions()[m.tranIndex].tag;
}

std::vector<SuccessorEntry> successorDistribution(const System& s, const std::vector<Rule>& rules) {
    struct Bucket {
        System target;
        // label -> (rate value -> match count); keeps the per-label sum exact
        std::map<std::string, std::map<double, std::uint64_t>> counts;
    };
    std::map<std::string, Bucket> buckets; // keyed by canonical system key

    for (const Rule& r : rules) {
        for (const Match& m : r.matcher(s)) {
            System target = normalize(r.transformer(s, m));
            std::string key = sysKey(target);
            auto it = buckets.find(key);
            if (it == buckets.end())
                it = buckets.emplace(std::move(key), Bucket{std::move(target), {}}).first;
            it->second.counts[matchLabel(r, s, m)][matchRate(r, s, m)] += 1;
        }
    }

    std::vector<SuccessorEntry> out;
    out.reserve(buckets.size());
    for (auto& [key, bucket] : buckets) {
        SuccessorEntry e;
        e.target = std::move(bucket.target);
        e.key = key;
        for (const auto& [label, byRate] : bucket.counts) {
            double sum = 0;
            for (const auto& [rate, count] : byRate) sum += rate * static_cast<double>(count);
            e.labelRates.emplace(label, sum);
            e.total += sum;
        }
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace rwspt
