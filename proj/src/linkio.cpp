#include "usl3/linkio.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace usl3 {

namespace {

struct Slot {
    int crossing;
    int pos; // 0..3
};

// role of a slot given the crossing's over-direction: true = the arc ends here
bool slot_is_end(const Crossing& x, int pos) {
    switch (pos) {
        case 0: return true;   // under in
        case 2: return false;  // under out
        case 1: return x.over_in_at_1;
        default: return !x.over_in_at_1;
    }
}

} // namespace

int LinkDiagram::component_of_arc(int arc) const {
    auto it = std::lower_bound(arcs.begin(), arcs.end(), arc);
    if (it == arcs.end() || *it != arc) throw ParseError("unknown arc label");
    return arc_component[it - arcs.begin()];
}

int LinkDiagram::linking_number(const std::set<int>& A, const std::set<int>& B) const {
    for (int a : A)
        if (B.count(a)) throw ParseError("linking_number: overlapping component sets");
    auto check = [&](const std::set<int>& S) {
        for (int c : S)
            if (c < 0 || c >= n_components) throw ParseError("linking_number: component out of range");
    };
    check(A);
    check(B);
    int total = 0;
    for (const auto& x : crossings) {
        int cu = component_of_arc(x.he[0]);
        int co = component_of_arc(x.he[1]);
        bool ab = A.count(cu) && B.count(co);
        bool ba = B.count(cu) && A.count(co);
        if (ab || ba) total += x.sign();
    }
    if (total % 2 != 0) throw ParseError("internal: odd signed crossing count between sublinks");
    return total / 2;
}

LinkDiagram LinkDiagram::sublink(const std::set<int>& keep) const {
    // union-find over arc labels for strands running through removed crossings
    std::map<int, int> parent;
    for (int a : arcs) parent[a] = a;
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    std::vector<Crossing> out;
    for (const auto& x : crossings) {
        int cu = component_of_arc(x.he[0]);
        int co = component_of_arc(x.he[1]);
        bool ku = keep.count(cu) > 0, ko = keep.count(co) > 0;
        if (ku && ko) {
            out.push_back(x);
        } else if (ku && !ko) {
            unite(x.he[0], x.he[2]); // under strand runs through
        } else if (!ku && ko) {
            unite(x.he[1], x.he[3]);
        }
    }
    for (auto& x : out)
        for (auto& h : x.he) h = find(h);

    // kept crossing-components that lost all their crossings become unknots
    std::set<int> kept_cross_comps, present;
    int cross_comp_count = 0;
    for (size_t i = 0; i < arcs.size(); ++i) cross_comp_count = std::max(cross_comp_count, arc_component[i] + 1);
    for (int c = 0; c < cross_comp_count; ++c)
        if (keep.count(c)) kept_cross_comps.insert(c);
    for (const auto& x : crossings) {
        int cu = component_of_arc(x.he[0]);
        int co = component_of_arc(x.he[1]);
        if (keep.count(cu) && keep.count(co)) {
            present.insert(cu);
            present.insert(co);
        }
    }
    int unknots = 0;
    for (int c : kept_cross_comps)
        if (!present.count(c)) ++unknots;
    for (int c = cross_comp_count; c < n_components; ++c)
        if (keep.count(c)) ++unknots;

    return finalize_diagram(std::move(out), unknots);
}

std::string LinkDiagram::to_pd_string() const {
    std::ostringstream os;
    os << "PD[";
    bool first = true;
    for (const auto& x : crossings) {
        if (!first) os << ", ";
        first = false;
        os << "X[" << x.he[0] << "," << x.he[1] << "," << x.he[2] << "," << x.he[3] << "]";
    }
    for (int i = 0; i < unknot_components; ++i) {
        if (!first) os << ", ";
        first = false;
        os << "O";
    }
    os << "]";
    return os.str();
}

std::string LinkDiagram::to_json() const {
    nlohmann::json j;
    j["crossings"] = nlohmann::json::array();
    j["over_in"] = nlohmann::json::array();
    for (const auto& x : crossings) {
        j["crossings"].push_back({x.he[0], x.he[1], x.he[2], x.he[3]});
        j["over_in"].push_back(x.over_in_at_1 ? 1 : 3);
    }
    if (unknot_components) j["unknots"] = unknot_components;
    return j.dump();
}

LinkDiagram finalize_diagram(std::vector<Crossing> crossings, int unknot_components) {
    LinkDiagram d;
    d.crossings = std::move(crossings);
    d.unknot_components = unknot_components;

    std::map<int, std::vector<Slot>> slots;
    for (size_t i = 0; i < d.crossings.size(); ++i)
        for (int p = 0; p < 4; ++p) slots[d.crossings[i].he[p]].push_back({(int)i, p});

    for (auto& [arc, ss] : slots)
        if (ss.size() != 2)
            throw ParseError("half-edge multiplicity: arc " + std::to_string(arc) + " appears " +
                             std::to_string(ss.size()) + " times (expected 2)");

    // Infer over-strand directions. Under-slots have fixed roles; each arc
    // needs exactly one end-slot and one begin-slot.
    std::vector<int> state(d.crossings.size(), -1); // -1 unknown, else 0/1 for over_in_at_1
    std::deque<int> work;                           // arcs to (re)examine

    auto slot_role_known = [&](const Slot& s) {
        return s.pos == 0 || s.pos == 2 || state[s.crossing] != -1;
    };
    auto slot_role = [&](const Slot& s) { // valid only if known; true = end
        Crossing tmp = d.crossings[s.crossing];
        if (state[s.crossing] != -1) tmp.over_in_at_1 = state[s.crossing] == 1;
        return slot_is_end(tmp, s.pos);
    };

    for (auto& [arc, ss] : slots) work.push_back(arc);
    auto propagate = [&]() {
        while (!work.empty()) {
            int arc = work.front();
            work.pop_front();
            auto& ss = slots[arc];
            bool k0 = slot_role_known(ss[0]), k1 = slot_role_known(ss[1]);
            if (k0 == k1) continue; // both known (checked later) or both unknown
            const Slot& known = k0 ? ss[0] : ss[1];
            const Slot& unk = k0 ? ss[1] : ss[0];
            bool need_end = !slot_role(known); // other slot takes the complementary role
            // unk.pos is 1 or 3 here
            int v = (unk.pos == 1) == need_end ? 1 : 0;
            state[unk.crossing] = v;
            // the crossing's other over-arc may now force further crossings
            const Crossing& x = d.crossings[unk.crossing];
            work.push_back(x.he[1]);
            work.push_back(x.he[3]);
        }
    };
    propagate();

    // components whose arcs only ever pass over: orient so the over strand
    // runs from the smaller arc label to the larger (deterministic tie-break)
    for (size_t i = 0; i < d.crossings.size(); ++i) {
        if (state[i] != -1) continue;
        const Crossing& x = d.crossings[i];
        state[i] = x.he[1] <= x.he[3] ? 1 : 0;
        work.push_back(x.he[1]);
        work.push_back(x.he[3]);
        propagate();
    }
    for (size_t i = 0; i < d.crossings.size(); ++i) d.crossings[i].over_in_at_1 = state[i] == 1;

    for (auto& [arc, ss] : slots) {
        int ends = 0;
        for (auto& s : ss) ends += slot_role(s) ? 1 : 0;
        if (ends != 1)
            throw ParseError("inconsistent orientation at arc " + std::to_string(arc));
    }

    // successor map: arc -> next arc along its component
    std::map<int, int> succ;
    for (const auto& x : d.crossings) {
        succ[x.he[0]] = x.he[2];
        if (x.over_in_at_1)
            succ[x.he[1]] = x.he[3];
        else
            succ[x.he[3]] = x.he[1];
    }

    for (auto& [arc, ss] : slots) d.arcs.push_back(arc);
    std::sort(d.arcs.begin(), d.arcs.end());
    d.arc_component.assign(d.arcs.size(), -1);

    auto arc_index = [&](int a) {
        return std::lower_bound(d.arcs.begin(), d.arcs.end(), a) - d.arcs.begin();
    };
    int comp = 0;
    for (size_t i = 0; i < d.arcs.size(); ++i) {
        if (d.arc_component[i] != -1) continue;
        int a = d.arcs[i];
        while (d.arc_component[arc_index(a)] == -1) {
            d.arc_component[arc_index(a)] = comp;
            a = succ.at(a);
        }
        ++comp;
    }
    d.n_components = comp + d.unknot_components;

    d.n_plus = d.n_minus = 0;
    for (const auto& x : d.crossings) (x.sign() > 0 ? d.n_plus : d.n_minus)++;
    return d;
}

namespace {

struct Cursor {
    const std::string& s;
    size_t i = 0;
    void skip() {
        while (i < s.size() && (std::isspace((unsigned char)s[i]) || s[i] == ',')) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c))
            throw ParseError(std::string("expected '") + c + "' at offset " + std::to_string(i));
    }
    int integer() {
        skip();
        size_t start = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
        if (start == i) throw ParseError("expected integer at offset " + std::to_string(start));
        return std::stoi(s.substr(start, i - start));
    }
    bool word(const char* w) {
        skip();
        size_t n = std::strlen(w);
        if (s.compare(i, n, w) == 0) {
            i += n;
            return true;
        }
        return false;
    }
    bool done() {
        skip();
        return i >= s.size();
    }
};

} // namespace

LinkDiagram parse_pd(const std::string& text) {
    Cursor c{text};
    c.word("PD");
    c.expect('[');
    std::vector<Crossing> xs;
    int unknots = 0;
    while (!c.eat(']')) {
        if (c.word("X")) {
            c.expect('[');
            Crossing x;
            for (int p = 0; p < 4; ++p) x.he[p] = c.integer();
            c.expect(']');
            xs.push_back(x);
        } else if (c.word("O")) {
            ++unknots;
        } else {
            throw ParseError("malformed PD code at offset " + std::to_string(c.i));
        }
    }
    if (!c.done()) throw ParseError("trailing input after PD code at offset " + std::to_string(c.i));
    return finalize_diagram(std::move(xs), unknots);
}

LinkDiagram parse_pd_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.contains("crossings") || !j["crossings"].is_array())
        throw ParseError("JSON diagram needs a \"crossings\" array");
    std::vector<Crossing> xs;
    for (auto& row : j["crossings"]) {
        if (!row.is_array() || row.size() != 4) throw ParseError("each crossing needs 4 arc labels");
        Crossing x;
        for (int p = 0; p < 4; ++p) x.he[p] = row[p].get<int>();
        xs.push_back(x);
    }
    int unknots = j.value("unknots", 0);
    LinkDiagram d = finalize_diagram(std::move(xs), unknots);
    if (j.contains("over_in")) {
        auto& oi = j["over_in"];
        if (oi.size() != d.crossings.size()) throw ParseError("over_in length mismatch");
        std::vector<Crossing> xs2 = d.crossings;
        for (size_t i = 0; i < xs2.size(); ++i) {
            int v = oi[i].get<int>();
            if (v != 1 && v != 3) throw ParseError("over_in entries must be 1 or 3");
            xs2[i].over_in_at_1 = v == 1;
        }
        // re-finalize with pinned directions: feed through the validator by
        // checking consistency directly
        LinkDiagram d2;
        d2 = finalize_diagram(std::move(xs2), unknots);
        for (size_t i = 0; i < d2.crossings.size(); ++i)
            if (d2.crossings[i].over_in_at_1 != (oi[i].get<int>() == 1))
                throw ParseError("over_in conflicts with arc orientations");
        return d2;
    }
    return d;
}

LinkDiagram parse_braid(const std::string& word, int strands) {
    std::vector<int> gens;
    std::istringstream is(word);
    std::string tok;
    while (is >> tok) {
        int sign = 1;
        size_t p = 0;
        if (tok[0] == 's' || tok[0] == 'S') p = 1;
        size_t q = p;
        if (q < tok.size() && (tok[q] == '-' || tok[q] == '+')) ++q;
        while (q < tok.size() && std::isdigit((unsigned char)tok[q])) ++q;
        if (q == p) throw ParseError("malformed braid token: " + tok);
        int idx = std::stoi(tok.substr(p, q - p));
        std::string rest = tok.substr(q);
        if (rest == "^-1" || rest == "^{-1}" || rest == "'")
            sign = -1;
        else if (!rest.empty())
            throw ParseError("malformed braid token: " + tok);
        if (idx < 0) {
            idx = -idx;
            sign = -sign;
        }
        if (idx == 0) throw ParseError("generator index out of range: " + tok);
        gens.push_back(sign * idx);
    }
    int need = 1;
    for (int g : gens) need = std::max(need, std::abs(g) + 1);
    if (strands == 0) strands = need;
    if (strands < need) throw ParseError("generator index out of range for given strand count");

    std::vector<int> cur(strands), init(strands);
    int next_arc = 1;
    for (int i = 0; i < strands; ++i) cur[i] = init[i] = next_arc++;
    std::vector<bool> used(strands, false);

    std::vector<Crossing> xs;
    for (int g : gens) {
        int i = std::abs(g) - 1;
        used[i] = used[i + 1] = true;
        int L = cur[i], R = cur[i + 1];
        int ne = next_arc++; // NE arc: continuation of the left strand
        int nw = next_arc++; // NW arc: continuation of the right strand
        Crossing x;
        if (g > 0) {
            // left strand passes over (SW -> NE), under = right (SE -> NW)
            x.he = {R, ne, nw, L}; // CCW from under-in at SE
            x.over_in_at_1 = false;
        } else {
            // right strand passes over (SE -> NW), under = left (SW -> NE)
            x.he = {L, R, ne, nw}; // CCW from under-in at SW
            x.over_in_at_1 = true;
        }
        xs.push_back(x);
        cur[i] = nw;
        cur[i + 1] = ne;
    }

    // trace closure: identify final arcs with initial arcs
    std::map<int, int> rep;
    std::function<int(int)> find = [&](int a) {
        auto it = rep.find(a);
        if (it == rep.end() || it->second == a) return a;
        int r = find(it->second);
        rep[a] = r;
        return r;
    };
    int unknots = 0;
    for (int i = 0; i < strands; ++i) {
        if (!used[i]) {
            ++unknots;
            continue;
        }
        int a = find(cur[i]), b = find(init[i]);
        if (a != b) rep[std::max(a, b)] = std::min(a, b);
    }
    for (auto& x : xs)
        for (auto& h : x.he) h = find(h);

    return finalize_diagram(std::move(xs), unknots);
}

std::vector<CorpusDiagram> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open corpus file: " + path);
    nlohmann::json j;
    in >> j;
    std::vector<CorpusDiagram> out;
    for (auto& e : j) {
        CorpusDiagram cd;
        cd.name = e.at("name").get<std::string>();
        cd.link = e.at("link").get<std::string>();
        if (e.contains("braid")) {
            cd.diagram = parse_braid(e["braid"].get<std::string>(), e.value("strands", 0));
        } else if (e.contains("pd")) {
            cd.diagram = parse_pd(e["pd"].get<std::string>());
        } else if (e.contains("json")) {
            cd.diagram = parse_pd_json(e["json"].dump());
        } else {
            throw ParseError("corpus entry without diagram data: " + cd.name);
        }
        out.push_back(std::move(cd));
    }
    return out;
}

} // namespace usl3
