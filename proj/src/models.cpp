#include "rwspt/models.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "rwspt/algebra.hpp"
#include "rwspt/errors.hpp"

namespace rwspt {
namespace {

const std::string kStoreTag = "s";
const std::string kWorkTag = "w";
const std::string kDoneTag = "a";
const std::string kFaultTag = "f";
const std::string kLineTag = "L";

Place storePlace() { return Place(kStoreTag, 0); }

Place linePlace(const std::string& facet, std::uint32_t robot, std::uint32_t line) {
    return Place(std::vector<LabelPair>{LabelPair(facet, robot), LabelPair(kLineTag, line)});
}

bool underLine(const Place& p, std::uint32_t line) {
    return p.depth() == 2 && p.root().tag == kLineTag && p.root().index == line;
}

bool touchesLine(const Transition& t, std::uint32_t line) {
    for (const Marking* bag : {&t.input, &t.output, &t.inhibitor})
        for (const auto& [place, mult] : *bag)
            if (underLine(place, line)) return true;
    return false;
}

std::vector<std::uint32_t> lineIndices(const Net& n) {
    std::set<std::uint32_t> out;
    for (const Place& p : n.places())
        if (p.depth() == 2 && p.root().tag == kLineTag) out.insert(p.root().index);
    return {out.begin(), out.end()};
}

std::vector<std::uint32_t> robotIndices(const Net& n, std::uint32_t line) {
    std::set<std::uint32_t> out;
    for (const Place& p : n.places())
        if (underLine(p, line) && p.leaf().tag == kWorkTag) out.insert(p.leaf().index);
    return {out.begin(), out.end()};
}

std::optional<std::uint32_t> faultedRobot(const System& s, std::uint32_t line) {
    for (const auto& [place, mult] : s.marking())
        if (underLine(place, line) && place.leaf().tag == kFaultTag)
            return place.leaf().index;
    return std::nullopt;
}

void validate(const PLConfig& cfg) {
    if (cfg.lines < 1 || cfg.robotsPerLine < 1 || cfg.loadMultiplier < 1)
        throw ValidationError("NPLsys requires N, K, M >= 1");
    for (double r : {cfg.rates.load, cfg.rates.process, cfg.rates.assemble, cfg.rates.fault,
                     cfg.rates.reconfigure, cfg.rates.disconnect})
        if (!(r > 0))
            throw ValidationError("NPLsys rates must be positive");
}

[[noreturn]] void staleMatch(const std::string& rule) {
    throw ValidationError("stale " + rule + " match: the state no longer satisfies its guard");
}

// Per-robot arc weights of a line's ld (output, w places) or asm (input,
// a places). After reconfigurations the weights are no longer uniform.
std::map<std::uint32_t, std::uint64_t> branchWeights(const Marking& bag, std::uint32_t line,
                                                     const std::string& facet) {
    std::map<std::uint32_t, std::uint64_t> out;
    for (const auto& [place, mult] : bag)
        if (underLine(place, line) && place.leaf().tag == facet) out[place.leaf().index] = mult;
    return out;
}

// Removes a line wholesale: its transitions go away, its in-progress items
// return to the store as raw material, and its fault mark disappears with it.
System disconnectLine(const System& s, std::uint32_t line) {
    std::vector<Transition> ts;
    for (const Transition& t : s.net().transitions())
        if (!touchesLine(t, line)) ts.push_back(t);
    Marking mk;
    std::uint64_t reclaimed = 0;
    for (const auto& [place, mult] : s.marking()) {
        if (!underLine(place, line)) mk.add(place, mult);
        else if (place.leaf().tag != kFaultTag) reclaimed += mult;
    }
    if (reclaimed > 0) mk.add(storePlace(), reclaimed);
    return System(Net(std::move(ts)), std::move(mk));
}

Rule faultRule(const PLRates& rates) {
    Rule r;
    r.name = "fault";
    r.rate = rates.fault;
    r.matcher = [](const System& s) {
        std::vector<Match> out;
        for (std::uint32_t line : lineIndices(s.net())) {
            if (faultedRobot(s, line)) continue; // previous fault not yet handled
            for (std::uint32_t robot : robotIndices(s.net(), line)) {
                Match m;
                m.witness = "fault:L" + std::to_string(line) + ":R" + std::to_string(robot);
                m.coords = {line, robot};
                out.push_back(std::move(m));
            }
        }
        return out;
    };
    r.transformer = [](const System& s, const Match& m) {
        if (m.coords.size() != 2) staleMatch("fault");
        const std::uint32_t line = m.coords[0], robot = m.coords[1];
        const auto robots = robotIndices(s.net(), line);
        if (faultedRobot(s, line) || !std::binary_search(robots.begin(), robots.end(), robot))
            staleMatch("fault");
        Marking mk = s.marking();
        mk.add(linePlace(kFaultTag, robot, line));
        return System(s.netPtr(), std::move(mk));
    };
    return r;
}

Rule reconfigureRule(const PLRates& rates) {
    Rule r;
    r.name = "reconfigure";
    r.rate = rates.reconfigure;
    r.matcher = [](const System& s) {
        std::vector<Match> out;
        for (std::uint32_t line : lineIndices(s.net())) {
            const auto faulted = faultedRobot(s, line);
            if (!faulted) continue;
            const auto robots = robotIndices(s.net(), line);
            if (robots.size() < 2) continue;
            for (std::uint32_t dest : robots) {
                if (dest == *faulted) continue;
                Match m;
                m.witness = "reconfigure:L" + std::to_string(line) + ":F" +
                            std::to_string(*faulted) + ":D" + std::to_string(dest);
                m.coords = {line, *faulted, dest};
                out.push_back(std::move(m));
            }
        }
        return out;
    };
    r.transformer = [](const System& s, const Match& m) {
        if (m.coords.size() != 3) staleMatch("reconfigure");
        const std::uint32_t line = m.coords[0], faulted = m.coords[1], dest = m.coords[2];
        const Net& net = s.net();
        const auto robots = robotIndices(net, line);
        if (robots.size() < 2 || dest == faulted ||
            !std::binary_search(robots.begin(), robots.end(), faulted) ||
            !std::binary_search(robots.begin(), robots.end(), dest) ||
            faultedRobot(s, line) != faulted)
            staleMatch("reconfigure");

        // Survivors keep their relative order and are renumbered 0..n-1.
        std::map<std::uint32_t, std::uint32_t> renumber;
        for (std::uint32_t robot : robots)
            if (robot != faulted) renumber.emplace(robot, static_cast<std::uint32_t>(renumber.size()));

        std::map<std::uint32_t, std::uint64_t> loadShare, joinShare;
        for (const Transition& t : net.transitions()) {
            if (!touchesLine(t, line)) continue;
            if (t.tag == "ld") loadShare = branchWeights(t.output, line, kWorkTag);
            else if (t.tag == "asm") joinShare = branchWeights(t.input, line, kDoneTag);
        }
        loadShare[dest] += loadShare[faulted];
        joinShare[dest] += joinShare[faulted];

        std::vector<Transition> ts;
        ts.reserve(net.transitions().size());
        for (const Transition& t : net.transitions()) {
            if (!touchesLine(t, line)) {
                ts.push_back(t);
            } else if (t.tag == "ld") {
                Marking out;
                for (const auto& [robot, renamed] : renumber)
                    out.add(linePlace(kWorkTag, renamed, line), loadShare.at(robot));
                ts.emplace_back(t.input, std::move(out), t.inhibitor, t.tag, t.rate);
            } else if (t.tag == "asm") {
                Marking in;
                for (const auto& [robot, renamed] : renumber)
                    in.add(linePlace(kDoneTag, renamed, line), joinShare.at(robot));
                ts.emplace_back(std::move(in), t.output, t.inhibitor, t.tag, t.rate);
            } else if (t.tag == "ln") {
                const std::uint32_t robot = t.input.begin()->first.leaf().index;
                if (robot == faulted) continue;
                const std::uint32_t renamed = renumber.at(robot);
                Marking in, out, inh;
                in.add(linePlace(kWorkTag, renamed, line));
                out.add(linePlace(kDoneTag, renamed, line));
                inh.add(linePlace(kFaultTag, renamed, line));
                ts.emplace_back(std::move(in), std::move(out), std::move(inh), t.tag, t.rate);
            } else {
                throw ValidationError("reconfigure applies only to production-line nets");
            }
        }

        // In-progress tokens of the removed robot migrate to the designated
        // survivor; the fault token is consumed by the repair.
        Marking mk;
        for (const auto& [place, mult] : s.marking()) {
            if (!underLine(place, line)) {
                mk.add(place, mult);
                continue;
            }
            const std::uint32_t robot = place.leaf().index;
            if (place.leaf().tag == kFaultTag) {
                if (robot == faulted) continue;
                mk.add(linePlace(kFaultTag, renumber.at(robot), line), mult);
            } else {
                const std::uint32_t target = robot == faulted ? dest : robot;
                mk.add(linePlace(place.leaf().tag, renumber.at(target), line), mult);
            }
        }
        return System(Net(std::move(ts)), std::move(mk));
    };
    return r;
}

Rule disconnectRule(const PLRates& rates) {
    Rule r;
    r.name = "disconnect";
    r.rate = rates.disconnect;
    r.matcher = [](const System& s) {
        std::vector<Match> out;
        const auto ls = lineIndices(s.net());
        if (ls.size() < 2) return out; // the last line is kept even if dead
        for (std::uint32_t line : ls) {
            const auto robots = robotIndices(s.net(), line);
            if (robots.size() != 1 || faultedRobot(s, line) != robots.front()) continue;
            Match m;
            m.witness = "disconnect:L" + std::to_string(line);
            m.coords = {line, robots.front()};
            out.push_back(std::move(m));
        }
        return out;
    };
    r.transformer = [](const System& s, const Match& m) {
        if (m.coords.size() != 2) staleMatch("disconnect");
        const std::uint32_t line = m.coords[0], robot = m.coords[1];
        const auto ls = lineIndices(s.net());
        const auto robots = robotIndices(s.net(), line);
        if (ls.size() < 2 || robots.size() != 1 || robots.front() != robot ||
            faultedRobot(s, line) != robot)
            staleMatch("disconnect");

        return disconnectLine(s, line);
    };
    return r;
}

std::uint32_t parseCount(const std::string& key, const std::string& value) {
    std::uint32_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || out < 1)
        throw ValidationError("parameter " + key + " must be a positive integer, got '" + value + "'");
    return out;
}

double parseRate(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double out = std::stod(value, &used);
        if (used == value.size() && out > 0) return out;
    } catch (const std::exception&) {
    }
    throw ValidationError("parameter " + key + " must be a positive rate, got '" + value + "'");
}

} // namespace

System buildNPLsys(const PLConfig& cfg) {
    validate(cfg);
    const Place store = storePlace();

    std::vector<Transition> line;
    Marking batch;
    batch.add(store, cfg.robotsPerLine);

    Marking fresh;
    for (std::uint32_t r = 0; r < cfg.robotsPerLine; ++r) fresh.add(Place(kWorkTag, r));
    line.emplace_back(batch, std::move(fresh), Marking{}, "ld", cfg.rates.load);

    for (std::uint32_t r = 0; r < cfg.robotsPerLine; ++r) {
        Marking in, out, inh;
        in.add(Place(kWorkTag, r));
        out.add(Place(kDoneTag, r));
        inh.add(Place(kFaultTag, r));
        line.emplace_back(std::move(in), std::move(out), std::move(inh), "ln", cfg.rates.process);
    }

    Marking done;
    for (std::uint32_t r = 0; r < cfg.robotsPerLine; ++r) done.add(Place(kDoneTag, r));
    line.emplace_back(std::move(done), batch, Marking{}, "asm", cfg.rates.assemble);

    Net net = replicate(Net(std::move(line)), kLineTag, cfg.lines, {store});

    Marking m0;
    m0.add(store, static_cast<std::uint64_t>(cfg.robotsPerLine) * cfg.loadMultiplier);
    return System(std::move(net), std::move(m0));
}

std::vector<Rule> degradationRules(const PLConfig& cfg) {
    validate(cfg);
    return {firingRule(), faultRule(cfg.rates), reconfigureRule(cfg.rates),
            disconnectRule(cfg.rates)};
}

PLConfig parsePLConfig(const std::string& text) {
    PLConfig cfg;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find_first_of(",\n", pos);
        if (end == std::string::npos) end = text.size();
        std::string item = text.substr(pos, end - pos);
        pos = end + 1;

        if (const auto hash = item.find('#'); hash != std::string::npos) item.erase(hash);
        const auto first = item.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        item = item.substr(first, item.find_last_not_of(" \t\r") - first + 1);

        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ValidationError("expected key=value in model parameters, got '" + item + "'");
        std::string key = item.substr(0, eq);
        std::string value = item.substr(eq + 1);
        if (const auto k = key.find_last_not_of(" \t"); k != std::string::npos) key.erase(k + 1);
        if (const auto v = value.find_first_not_of(" \t"); v != std::string::npos) value = value.substr(v);

        if (key == "N") cfg.lines = parseCount(key, value);
        else if (key == "K") cfg.robotsPerLine = parseCount(key, value);
        else if (key == "M") cfg.loadMultiplier = parseCount(key, value);
        else if (key == "load") cfg.rates.load = parseRate(key, value);
        else if (key == "process") cfg.rates.process = parseRate(key, value);
        else if (key == "assemble") cfg.rates.assemble = parseRate(key, value);
        else if (key == "fault") cfg.rates.fault = parseRate(key, value);
        else if (key == "reconfigure") cfg.rates.reconfigure = parseRate(key, value);
        else if (key == "disconnect") cfg.rates.disconnect = parseRate(key, value);
        else throw ValidationError("unknown model parameter '" + key + "'");
    }
    return cfg;
}

} // namespace rwspt
