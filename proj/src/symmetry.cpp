#include "rwspt/symmetry.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rwspt/canon.hpp"
#include "rwspt/errors.hpp"

namespace rwspt {

namespace {

// Byte key of a root-side label suffix, root to leaf. Pair layout matches
// canon.hpp, so context keys inherit the canonical order.
void appendContextKey(std::string& out, const std::vector<LabelPair>& pairs, std::size_t begin) {
    for (std::size_t i = pairs.size(); i-- > begin;) {
        out.append(pairs[i].tag);
        out.push_back('\x02');
        detail::appendDec(out, pairs[i].index, 8);
        out.push_back('\x03');
    }
}

// Identity of one (context, tag) site: context bytes, NUL, tag. NUL occurs
// nowhere else, so the encoding is injective.
std::string slotKey(const std::vector<LabelPair>& pairs, std::size_t begin,
                    const std::string& tag) {
    std::string out;
    appendContextKey(out, pairs, begin);
    out.push_back('\x00');
    out.append(tag);
    return out;
}

// One (context, tag) site of the label hierarchy and the indices seen there.
struct Slot {
    std::vector<LabelPair> context; // leaf-first
    std::string tag;
    std::set<std::uint32_t> indices;
    // Leaf-side tag sequences of the places carrying each index; candidate
    // swaps are only required between indices with equal sequence multisets.
    std::map<std::uint32_t, std::vector<std::string>> prefixes;
};

std::map<std::string, Slot> scanSlots(const std::set<Place>& places) {
    std::map<std::string, Slot> slots;
    for (const Place& p : places) {
        const auto& pairs = p.pairs();
        for (std::size_t pos = 0; pos < pairs.size(); ++pos) {
            Slot& slot = slots[slotKey(pairs, pos + 1, pairs[pos].tag)];
            if (slot.tag.empty()) {
                slot.context.assign(pairs.begin() + pos + 1, pairs.end());
                slot.tag = pairs[pos].tag;
            }
            slot.indices.insert(pairs[pos].index);
            std::string prefix;
            for (std::size_t q = 0; q < pos; ++q) {
                if (q) prefix.push_back('\x02');
                prefix.append(pairs[q].tag);
            }
            slot.prefixes[pairs[pos].index].push_back(std::move(prefix));
        }
    }
    for (auto& [key, slot] : slots)
        for (auto& [idx, seqs] : slot.prefixes) std::sort(seqs.begin(), seqs.end());
    return slots;
}

// Tags at one context with identical index sets permute together: they are
// facets of the same replicated component (w/a/f of one robot), whereas tags
// with different index sets (a shared store next to the lines) stay fixed.
struct Bundle {
    std::vector<LabelPair> context;
    std::string ctxKey;
    std::vector<std::string> tags;       // sorted
    std::vector<std::uint32_t> indices;  // sorted
    std::map<std::uint32_t, std::string> skeleton;
};

std::vector<Bundle> makeBundles(const std::map<std::string, Slot>& slots) {
    std::map<std::pair<std::string, std::string>, Bundle> acc;
    for (const auto& [key, slot] : slots) {
        std::string ctxKey = key.substr(0, key.find('\x00'));
        std::string idxKey;
        for (std::uint32_t i : slot.indices) detail::appendDec(idxKey, i, 8);
        Bundle& b = acc[{std::move(ctxKey), std::move(idxKey)}];
        if (b.tags.empty()) {
            b.context = slot.context;
            appendContextKey(b.ctxKey, slot.context, 0);
            b.indices.assign(slot.indices.begin(), slot.indices.end());
        }
        b.tags.push_back(slot.tag); // slot map order keeps tags sorted
        for (const auto& [idx, seqs] : slot.prefixes) {
            std::string& sk = b.skeleton[idx];
            sk.append(slot.tag);
            sk.push_back('\x01');
            for (const std::string& s : seqs) {
                sk.append(s);
                sk.push_back('\x03');
            }
            sk.push_back('\x04');
        }
    }
    std::vector<Bundle> out;
    out.reserve(acc.size());
    for (auto& [key, b] : acc) out.push_back(std::move(b));
    return out;
}

// (context, tag) -> (old index -> new index); missing entries are identity.
using IndexMap = std::unordered_map<std::string, std::unordered_map<std::uint32_t, std::uint32_t>>;

// Every pair is remapped against the place's original label, so composing
// levels is order-free even though shallow pairs appear in deep contexts.
Place mapPlace(const Place& p, const IndexMap& im) {
    const auto& pairs = p.pairs();
    std::vector<LabelPair> out;
    out.reserve(pairs.size());
    for (std::size_t pos = 0; pos < pairs.size(); ++pos) {
        std::uint32_t idx = pairs[pos].index;
        auto it = im.find(slotKey(pairs, pos + 1, pairs[pos].tag));
        if (it != im.end()) {
            auto jt = it->second.find(idx);
            if (jt != it->second.end()) idx = jt->second;
        }
        out.emplace_back(pairs[pos].tag, idx);
    }
    return Place(std::move(out));
}

Marking mapMarking(const Marking& m, const IndexMap& im) {
    Marking out;
    for (const auto& [place, mult] : m) out.add(mapPlace(place, im), mult);
    return out;
}

std::vector<Transition> mapTransitions(const std::vector<Transition>& ts, const IndexMap& im) {
    std::vector<Transition> out;
    out.reserve(ts.size());
    for (const Transition& t : ts)
        out.emplace_back(mapMarking(t.input, im), mapMarking(t.output, im),
                         mapMarking(t.inhibitor, im), t.tag, t.rate);
    return out;
}

bool swapIsAutomorphism(const Net& n, const Bundle& b, std::uint32_t i, std::uint32_t j) {
    IndexMap im;
    for (const std::string& tag : b.tags) {
        auto& mm = im[b.ctxKey + '\x00' + tag];
        mm[i] = j;
        mm[j] = i;
    }
    return netKeyOf(mapTransitions(n.transitions(), im)) == n.canonicalKey();
}

struct UnionFind {
    std::map<std::uint32_t, std::uint32_t> parent;

    std::uint32_t find(std::uint32_t x) {
        parent.emplace(x, x);
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

std::string pairText(const LabelPair& p) {
    return "< \"" + p.tag + "\" ; " + std::to_string(p.index) + " >";
}

std::string contextText(const std::vector<LabelPair>& ctx) {
    if (ctx.empty()) return "the root level";
    std::string out = "context";
    for (const LabelPair& p : ctx) {
        out.push_back(' ');
        out += pairText(p);
    }
    return out;
}

std::string joinTags(const std::vector<std::string>& tags) {
    std::string out = "{";
    for (std::size_t i = 0; i < tags.size(); ++i) {
        if (i) out += ", ";
        out += tags[i];
    }
    out += "}";
    return out;
}

SymmetryInfo computeInfo(const Net& n) {
    SymmetryInfo info;
    for (const Bundle& b : makeBundles(scanSlots(n.places()))) {
        UnionFind uf;
        const auto& idx = b.indices;
        for (std::size_t x = 0; x < idx.size(); ++x) {
            for (std::size_t y = x + 1; y < idx.size(); ++y) {
                // Automorphisms compose, so indices already in one class
                // need no direct test.
                if (uf.find(idx[x]) == uf.find(idx[y])) continue;
                if (b.skeleton.at(idx[x]) != b.skeleton.at(idx[y])) continue;
                if (swapIsAutomorphism(n, b, idx[x], idx[y]))
                    uf.unite(idx[x], idx[y]);
                else
                    info.violations.push_back(
                        "indices " + std::to_string(idx[x]) + " and " + std::to_string(idx[y]) +
                        " for tags " + joinTags(b.tags) + " at " + contextText(b.context) +
                        " are not exchangeable");
            }
        }
        std::map<std::uint32_t, std::vector<std::uint32_t>> classes;
        for (std::uint32_t i : idx) classes[uf.find(i)].push_back(i);
        for (auto& [root, members] : classes) {
            PermutableGroup g;
            g.context = b.context;
            g.tags = b.tags;
            g.members = std::move(members); // ascending: filled in index order
            info.groups.push_back(std::move(g));
        }
    }
    std::stable_sort(info.groups.begin(), info.groups.end(),
                     [](const PermutableGroup& a, const PermutableGroup& b) {
                         if (a.level() != b.level()) return a.level() > b.level();
                         std::string ka, kb;
                         appendContextKey(ka, a.context, 0);
                         appendContextKey(kb, b.context, 0);
                         if (ka != kb) return ka < kb;
                         if (a.tags != b.tags) return a.tags < b.tags;
                         return a.members < b.members;
                     });
    return info;
}

[[noreturn]] void throwNotSymmetric(const SymmetryInfo& info) {
    std::string msg = "net is not symmetrically labeled: " + info.violations.front();
    if (info.violations.size() > 1)
        msg += " (and " + std::to_string(info.violations.size() - 1) + " more)";
    throw NotSymmetricError(msg);
}

// placeKey with the pair at `pos` index-blinded, byte-aligned with canon's
// place keys so signatures inherit their order.
void appendAbstractedPlaceKey(std::string& out, const Place& p, std::size_t pos) {
    const auto& pairs = p.pairs();
    for (std::size_t i = pairs.size(); i-- > 0;) {
        if (i + 1 != pairs.size()) out.push_back('\x03');
        out.append(pairs[i].tag);
        out.push_back('\x02');
        if (i == pos)
            out.append(8, '?');
        else
            detail::appendDec(out, pairs[i].index, 8);
    }
    out.push_back('\x01');
}

// placeKey with every index at one of the bundle's sites replaced by a
// filler: \x04 for the member under comparison, \x05 for its co-members.
// Fillers keep the appendDec width so byte order stays canon-aligned.
void appendBlindedPlaceKey(std::string& out, const Place& p,
                           const std::set<std::string>& sites, std::uint32_t own) {
    const auto& pairs = p.pairs();
    for (std::size_t i = pairs.size(); i-- > 0;) {
        if (i + 1 != pairs.size()) out.push_back('\x03');
        out.append(pairs[i].tag);
        out.push_back('\x02');
        if (sites.count(slotKey(pairs, i + 1, pairs[i].tag)))
            out.append(8, pairs[i].index == own ? '\x04' : '\x05');
        else
            detail::appendDec(out, pairs[i].index, 8);
    }
    out.push_back('\x01');
}

// tranKey over blinded place keys. Blinding can reorder bag entries, so each
// bag is re-sorted before serialization.
std::string blindedTranKey(const Transition& t, const std::set<std::string>& sites,
                           std::uint32_t own) {
    std::string out = t.tag;
    out.push_back('\x02');
    auto bag = [&](const Marking& b) {
        std::vector<std::pair<std::string, std::uint64_t>> entries;
        for (const auto& [place, mult] : b) {
            std::string key;
            appendBlindedPlaceKey(key, place, sites, own);
            entries.emplace_back(std::move(key), mult);
        }
        std::sort(entries.begin(), entries.end());
        for (const auto& [key, mult] : entries) {
            out.append(key);
            detail::appendDec(out, mult, 20);
        }
        out.push_back('\x05');
    };
    bag(t.input);
    bag(t.output);
    bag(t.inhibitor);
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(t.rate);
    static const char hex[] = "0123456789abcdef";
    for (int shift = 60; shift >= 0; shift -= 4) out.push_back(hex[(bits >> shift) & 0xF]);
    return out;
}

// Bundle indices a transition carries in any of its bags.
std::set<std::uint32_t> touchedIndices(const Transition& t, const std::set<std::string>& sites) {
    std::set<std::uint32_t> out;
    auto scan = [&](const Marking& bag) {
        for (const auto& [place, mult] : bag) {
            const auto& pairs = place.pairs();
            for (std::size_t pos = 0; pos < pairs.size(); ++pos)
                if (sites.count(slotKey(pairs, pos + 1, pairs[pos].tag)))
                    out.insert(pairs[pos].index);
        }
    };
    scan(t.input);
    scan(t.output);
    scan(t.inhibitor);
    return out;
}

// Per-member marked places under the bundle's sites, own index blinded, in
// place order; the \xFF sentinel makes empty signatures sort last.
std::vector<std::string> markingSignatures(const Marking& m, const Bundle& b) {
    std::vector<std::string> sig(b.indices.size());
    for (const auto& [place, mult] : m) {
        const auto& pairs = place.pairs();
        if (pairs.size() <= b.context.size()) continue;
        const std::size_t pos = pairs.size() - 1 - b.context.size();
        if (!std::equal(pairs.begin() + static_cast<std::ptrdiff_t>(pos) + 1, pairs.end(),
                        b.context.begin(), b.context.end()))
            continue;
        if (!std::binary_search(b.tags.begin(), b.tags.end(), pairs[pos].tag)) continue;
        const auto it = std::lower_bound(b.indices.begin(), b.indices.end(), pairs[pos].index);
        if (it == b.indices.end() || *it != pairs[pos].index) continue;
        std::string& out = sig[static_cast<std::size_t>(it - b.indices.begin())];
        appendAbstractedPlaceKey(out, place, pos);
        detail::appendDec(out, mult, 20);
    }
    for (std::string& s : sig) s.push_back('\xFF');
    return sig;
}

// Normalized nets are shared: most states of one model reuse a handful of
// canonical nets, and analyzeNet memoizes per net object's key anyway.
std::shared_ptr<const Net> internNet(std::shared_ptr<const Net> net) {
    static std::mutex mu;
    static std::unordered_map<std::string, std::shared_ptr<const Net>> pool;
    std::lock_guard<std::mutex> lock(mu);
    return pool.try_emplace(net->canonicalKey(), std::move(net)).first->second;
}

} // namespace

std::shared_ptr<const SymmetryInfo> analyzeNet(const Net& n) {
    static std::mutex mu;
    static std::unordered_map<std::string, std::shared_ptr<const SymmetryInfo>> memo;
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = memo.find(n.canonicalKey()); it != memo.end()) return it->second;
    }
    auto info = std::make_shared<const SymmetryInfo>(computeInfo(n));
    std::lock_guard<std::mutex> lock(mu);
    return memo.try_emplace(n.canonicalKey(), std::move(info)).first->second;
}

bool checkSymmetricLabeling(const Net& n) { return analyzeNet(n)->symmetric(); }

std::vector<PermutableGroup> permutableGroups(const Net& n) {
    const auto info = analyzeNet(n);
    if (!info->symmetric()) throwNotSymmetric(*info);
    return info->groups;
}

System normalize(const System& s) {
    // Rank-compact indices per (context, tag) so they span 0..k-1. This is a
    // label bijection, not an automorphism: it canonizes the net subterm.
    const auto slots = scanSlots(s.net().places());
    IndexMap compact;
    bool identity = true;
    for (const auto& [key, slot] : slots) {
        std::uint32_t next = 0;
        for (std::uint32_t i : slot.indices) {
            if (i != next) {
                compact[key][i] = next;
                identity = false;
            }
            ++next;
        }
    }
    std::shared_ptr<const Net> net = s.netPtr();
    Marking m = s.marking();
    if (!identity) {
        net = std::make_shared<const Net>(mapTransitions(net->transitions(), compact));
        m = mapMarking(m, compact);
    }

    const auto info = analyzeNet(*net);
    if (!info->symmetric()) throwNotSymmetric(*info);

    // Canonize the index assignment of every bundle, deepest contexts first so
    // a member's keys cover its already-normalized subtree. Members are
    // ordered by their blinded view of the net, then by marking signature.
    // Automorphic members have equal views, so within a symmetry group this is
    // the plain signature order; across structurally different members (a
    // rewired branch next to an intact one) the view pins one representative
    // for all consistent reindexings. Either way the permutation renames net
    // and marking together, which preserves the transition structure exactly.
    const auto bundles = makeBundles(scanSlots(net->places()));
    std::size_t maxDepth = 0;
    for (const Bundle& b : bundles) maxDepth = std::max(maxDepth, b.context.size());
    for (std::size_t depth = maxDepth + 1; depth-- > 0;) {
        IndexMap im;
        bool changed = false;
        for (const Bundle& b : bundles) {
            if (b.context.size() != depth || b.indices.size() < 2) continue;
            std::set<std::string> sites;
            for (const std::string& tag : b.tags) sites.insert(b.ctxKey + '\x00' + tag);

            std::vector<std::vector<std::string>> views(b.indices.size());
            for (const Transition& t : net->transitions()) {
                for (std::uint32_t idx : touchedIndices(t, sites)) {
                    const auto it = std::lower_bound(b.indices.begin(), b.indices.end(), idx);
                    views[static_cast<std::size_t>(it - b.indices.begin())].push_back(
                        blindedTranKey(t, sites, idx));
                }
            }
            std::vector<std::string> key = markingSignatures(m, b);
            for (std::size_t k = 0; k < views.size(); ++k) {
                std::string joined;
                std::sort(views[k].begin(), views[k].end());
                for (const std::string& v : views[k]) {
                    joined.append(v);
                    joined.push_back('\x06');
                }
                joined.push_back('\x00');
                key[k].insert(0, joined);
            }

            std::vector<std::size_t> order(b.indices.size());
            std::iota(order.begin(), order.end(), 0);
            // Ties keep current index order; tied members carry identical
            // subtrees, so any tie order yields the same term.
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t c) { return key[a] < key[c]; });
            bool sorted = true;
            for (std::size_t k = 0; k < order.size(); ++k)
                if (order[k] != k) {
                    sorted = false;
                    break;
                }
            if (sorted) continue;

            for (const std::string& tag : b.tags) {
                auto& mm = im[b.ctxKey + '\x00' + tag];
                for (std::size_t k = 0; k < order.size(); ++k)
                    mm[b.indices[order[k]]] = b.indices[k];
            }
            changed = true;
        }
        if (changed) {
            net = std::make_shared<const Net>(mapTransitions(net->transitions(), im));
            m = mapMarking(m, im);
        }
    }
    return System(internNet(std::move(net)), std::move(m));
}

bool automorphicEquivalent(const System& a, const System& b) {
    if (!(a.net() == b.net()))
        throw ValidationError("automorphic equivalence requires a common net");
    // Normal forms may reindex the net itself, so compare whole systems.
    return sysKey(normalize(a)) == sysKey(normalize(b));
}

System applyGroupPerms(const System& s, const std::vector<PermutableGroup>& groups,
                       const std::vector<GroupPerm>& perms) {
    IndexMap im;
    std::set<std::size_t> seen;
    for (const GroupPerm& gp : perms) {
        if (gp.group >= groups.size()) throw ValidationError("group index out of range");
        if (!seen.insert(gp.group).second)
            throw ValidationError("duplicate group in permutation list");
        const PermutableGroup& g = groups[gp.group];
        std::vector<std::uint32_t> sorted = gp.image;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != g.members)
            throw ValidationError("image is not a permutation of the group members");
        std::string ck;
        appendContextKey(ck, g.context, 0);
        for (const std::string& tag : g.tags) {
            auto& mm = im[ck + '\x00' + tag];
            for (std::size_t k = 0; k < g.members.size(); ++k) mm[g.members[k]] = gp.image[k];
        }
    }
    return System(s.netPtr(), mapMarking(s.marking(), im));
}

} // namespace rwspt
