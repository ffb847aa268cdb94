#include "fipsim/replay_oracle.hpp"

#include "fipsim/nat.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fipsim {

namespace {

using U = unsigned long long;

struct NaiveSlot {
    bool is_d = false;
    bool satisfied = false;
    // D
    int dstate = 1;
    std::optional<U> witness;
    // R
    int rstate = 1;
    U v = 0;
    std::optional<U> trap;
    std::vector<U> baits;
    std::vector<U> xvals;
    std::optional<U> yv;

    bool pristine() const {
        if (satisfied) return false;
        if (is_d) return dstate == 1 && !witness;
        return rstate == 1 && baits.empty() && !trap;
    }
};

} // namespace

OracleReplay replay_oracle(const Scenario& sc) {
    if (sc.mode != Scenario::Mode::Scripted) {
        throw ConstructionError("replay_oracle: scripted scenarios only");
    }

    std::string out;
    U seq = 0;
    U hw = 0;
    U stage = 0;
    std::map<std::pair<U, U>, U> theta;  // (m, z) -> value
    std::map<std::pair<U, U>, U> lambda;
    std::map<std::pair<U, U>, U> frozen; // (m, z) -> owner priority
    std::set<U> a_set;
    std::map<U, NaiveSlot> slots;
    const U S = sc.stages;
    std::vector<bool> filler_done(S ? (S + 1) * (S + 1) : 1, false);

    auto cpair = [](U x, U y) { return (x + y) * (x + y + 1) / 2 + y; };
    auto cunpair = [](U z) {
        U w = static_cast<U>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
        while ((w + 1) * (w + 2) / 2 <= z) ++w;
        while (w * (w + 1) / 2 > z) --w;
        U y = z - w * (w + 1) / 2;
        return std::pair<U, U>(w - y, y);
    };

    // column layout: neutral 3n+1; column c = pair(m,k) has heads 33+6c and
    // 36+6c plus the values pair(3 + 3c/2, r) that are = 2 mod 3 and > 32.
    auto col_of = [&](U z) -> std::optional<std::pair<U, U>> { // -> (m, k)
        if (z % 3 == 1) return std::nullopt;
        if (z % 3 == 0) {
            if (z < 33) return std::nullopt;
            return cunpair((z - 33) / 3 / 2);
        }
        auto fr = cunpair(z);
        U f = fr.first;
        if (f >= 3 && (f - 3) % 3 != 2 && z > 32) {
            U u = f - 3;
            return cunpair(u - u / 3);
        }
        return std::nullopt;
    };
    auto note = [&](U x) {
        if (x > hw) hw = x;
    };
    auto fresh_neutral = [&]() {
        U b = hw > stage ? hw : stage;
        U x = b - b % 3 + 1;
        if (x <= b) x += 3;
        hw = x;
        return x;
    };
    auto fresh_col = [&](U c) {
        U b = hw > stage ? hw : stage;
        if (b < 32) b = 32;
        U f = 3 + (3 * c) / 2;
        U r = 0;
        while (cpair(f, r) <= b) ++r;
        U best;
        for (;;) {
            U t = cpair(f, r);
            if (t % 3 == 2 && t > 32) {
                best = t;
                break;
            }
            ++r;
        }
        U h0 = 33 + 6 * c;
        U h1 = h0 + 3;
        if (h0 > b && h0 < best) best = h0;
        if (h1 > b && h1 < best) best = h1;
        hw = best;
        return best;
    };

    auto author_of = [&](U p) {
        if (p % 2 == 0) return std::string("D:n=") + std::to_string(p / 2);
        U l = (p - 1) / 2;
        auto mk = cunpair(l);
        return std::string("R:l=") + std::to_string(l) + ",m=" + std::to_string(mk.first) +
               ",k=" + std::to_string(mk.second);
    };
    auto line = [&](const std::string& author, const std::string& rest) {
        out += std::to_string(seq) + " " + std::to_string(stage) + " " + author + " " + rest +
               "\n";
        ++seq;
    };
    auto field = [&](const char* name, U v) {
        note(v);
        return std::string(" ") + name + "=" + std::to_string(v);
    };

    auto eval = [&](const std::optional<ScriptedFn>& t, U x) -> std::optional<U> {
        if (!t || x >= stage) return std::nullopt;
        auto it = t->entries.find(x);
        if (it == t->entries.end()) return std::nullopt;
        if (it->second.second < stage && it->second.first < stage) return it->second.first;
        return std::nullopt;
    };
    auto binding_of = [&](U p) -> const SlotBinding* {
        auto it = sc.bindings.find(p);
        return it == sc.bindings.end() ? nullptr : &it->second;
    };

    auto initialize_lower = [&](U p) {
        line(author_of(p), "init-lower" + field("p", p));
        for (U q = p + 1; q <= stage; ++q) {
            auto it = slots.find(q);
            if (it == slots.end() || it->second.pristine()) continue;
            NaiveSlot& target = it->second;
            line("engine", "initialize" + field("p", q));
            // unfreeze every cell this slot still holds, ascending
            std::vector<std::pair<U, U>> held;
            for (const auto& [cell, owner] : frozen) {
                if (owner == q) held.push_back(cell);
            }
            for (const auto& cell : held) {
                frozen.erase(cell);
                line(author_of(q), "unfreeze" + field("m", cell.first) + field("z", cell.second));
            }
            target = NaiveSlot{};
            target.is_d = q % 2 == 0;
        }
    };

    auto visit_d = [&](U p, NaiveSlot& slot) {
        const SlotBinding* b = binding_of(p);
        if (!slot.witness) {
            U x = fresh_neutral();
            slot.witness = x;
            line(author_of(p), "pick-witness" + field("x", x));
        }
        auto y = eval(b ? b->phi : std::nullopt, *slot.witness);
        if (!y) return;
        line(author_of(p), "oracle-phi" + field("in", *slot.witness) + field("out", *y));
        line(author_of(p), "state-change" + field("to", 2));
        slot.dstate = 2;
        if (*y == 0) {
            a_set.insert(*slot.witness);
            line(author_of(p), "enumerate" + field("x", *slot.witness));
        }
        line(author_of(p), "satisfied");
        slot.satisfied = true;
        initialize_lower(p);
    };

    auto visit_r = [&](U p, NaiveSlot& slot) {
        U l = (p - 1) / 2;
        auto mk = cunpair(l);
        U m = mk.first;
        U c = l; // pair(m, k) == l by construction
        const SlotBinding* b = binding_of(p);
        for (int guard = 0; guard < 16; ++guard) {
            if (slot.rstate == 1) {
                slot.v = 1;
                line(author_of(p), "set-counter" + field("v", 1));
                line(author_of(p), "state-change" + field("to", 2));
                slot.rstate = 2;
                continue;
            }
            if (slot.rstate == 2) {
                if (slot.baits.size() < slot.v) {
                    U a = fresh_col(c);
                    slot.baits.push_back(a);
                    line(author_of(p), "pick-bait" + field("v", slot.v) + field("a", a));
                    frozen[{m, a}] = p;
                    line(author_of(p), "freeze" + field("m", m) + field("z", a));
                    if (slot.v == 1 && !slot.trap) {
                        U bp = fresh_col(c);
                        slot.trap = bp;
                        line(author_of(p), "pick-trap" + field("b", bp));
                        lambda[{m, bp}] = slot.baits[0];
                        line(author_of(p), "define-lambda" + field("m", m) + field("z", bp) +
                                               field("val", slot.baits[0]));
                    }
                }
                U a = slot.baits[slot.v - 1];
                auto x = eval(b ? b->delta : std::nullopt, a);
                if (!x) return;
                slot.xvals.push_back(*x);
                line(author_of(p), "oracle-delta" + field("v", slot.v) + field("in", a) +
                                       field("out", *x));
                line(author_of(p), "state-change" + field("to", 3));
                slot.rstate = 3;
                bool collision = false;
                for (std::size_t u = 0; u + 1 < slot.xvals.size(); ++u) {
                    if (slot.xvals[u] == *x) collision = true;
                }
                if (collision) {
                    frozen.erase({m, a});
                    line(author_of(p), "unfreeze" + field("m", m) + field("z", a));
                    for (std::size_t rr = 0; rr + 1 < slot.baits.size(); ++rr) {
                        auto it = theta.find({m, slot.baits[rr]});
                        if (it != theta.end() && it->second == *slot.trap) {
                            a_set.insert(slot.baits[rr]);
                            line(author_of(p), "enumerate" + field("x", slot.baits[rr]));
                        }
                    }
                    line(author_of(p), "satisfied");
                    slot.satisfied = true;
                    initialize_lower(p);
                    return;
                }
                theta[{m, a}] = *slot.trap;
                line(author_of(p), "define-theta" + field("m", m) + field("z", a) +
                                       field("val", *slot.trap));
                frozen.erase({m, a});
                line(author_of(p), "unfreeze" + field("m", m) + field("z", a));
                continue;
            }
            if (slot.rstate == 3) {
                U xv = slot.xvals.back();
                auto y = eval(b ? b->phik : std::nullopt, xv);
                if (!y) return;
                slot.yv = *y;
                line(author_of(p), "oracle-phik" + field("v", slot.v) + field("in", xv) +
                                       field("out", *y));
                line(author_of(p), "state-change" + field("to", 4));
                slot.rstate = 4;
                continue;
            }
            if (slot.rstate == 4) {
                if (*slot.yv == *slot.trap) {
                    line(author_of(p), "drop-y");
                    slot.yv.reset();
                    slot.v += 1;
                    line(author_of(p), "set-counter" + field("v", slot.v));
                    line(author_of(p), "state-change" + field("to", 2));
                    slot.rstate = 2;
                    continue;
                }
                U yv = *slot.yv;
                if (frozen.count({m, yv})) return;
                auto it = lambda.find({m, yv});
                if (it == lambda.end()) return;
                U cc = it->second;
                bool in_a = a_set.count(cc) != 0;
                line(author_of(p), "trap-exit" + field("v", slot.v) + field("c", cc) +
                                       field("in_a", in_a ? 1 : 0));
                if (!in_a) {
                    for (std::size_t rr = 0; rr < slot.baits.size(); ++rr) {
                        auto th = theta.find({m, slot.baits[rr]});
                        if (th != theta.end() && th->second == *slot.trap) {
                            a_set.insert(slot.baits[rr]);
                            line(author_of(p), "enumerate" + field("x", slot.baits[rr]));
                        }
                    }
                }
                line(author_of(p), "satisfied");
                slot.satisfied = true;
                initialize_lower(p);
                return;
            }
        }
        throw ConstructionError("replay_oracle: runaway routine");
    };

    for (stage = 0; stage < S; ++stage) {
        note(stage);
        line("engine", "stage" + field("s", stage));
        for (U p = 0; p <= stage; ++p) {
            auto it = slots.find(p);
            if (it == slots.end()) {
                NaiveSlot fresh;
                fresh.is_d = p % 2 == 0;
                it = slots.emplace(p, fresh).first;
            }
            NaiveSlot& slot = it->second;
            if (slot.satisfied) continue;
            line(author_of(p), "visit" + field("p", p));
            if (slot.is_d) visit_d(p, slot);
            else visit_r(p, slot);
        }
        // totality filler, lexicographic over (m, z) <= stage; finished pairs
        // are skipped via a bitmap, which emits nothing either way
        for (U m = 0; m <= stage; ++m) {
            for (U z = 0; z <= stage; ++z) {
                std::size_t bit = static_cast<std::size_t>(m * (S + 1) + z);
                if (filler_done[bit]) continue;
                auto col = col_of(z);
                if (col && col->first == m) {
                    if (frozen.count({m, z})) continue; // revisit later
                    if (!theta.count({m, z})) {
                        U c = cpair(col->first, col->second);
                        U y = fresh_col(c);
                        theta[{m, z}] = y;
                        lambda[{m, y}] = z;
                        line("filler", "filler-companion-theta" + field("m", m) + field("z", z) +
                                           field("y", y));
                    }
                    if (!lambda.count({m, z})) {
                        U c = cpair(col->first, col->second);
                        U x = fresh_col(c);
                        lambda[{m, z}] = x;
                        theta[{m, x}] = z;
                        line("filler", "filler-companion-lambda" + field("m", m) + field("z", z) +
                                           field("x", x));
                    }
                    filler_done[bit] = true;
                } else {
                    if (!theta.count({m, z}) && !lambda.count({m, z})) {
                        theta[{m, z}] = z;
                        lambda[{m, z}] = z;
                        line("filler", "filler-private" + field("m", m) + field("z", z));
                    }
                    filler_done[bit] = true;
                }
            }
        }
    }

    OracleReplay result;
    result.digest = 0xcbf29ce484222325ull;
    for (unsigned char ch : out) {
        result.digest ^= ch;
        result.digest *= 0x100000001b3ull;
    }
    result.trace_text = std::move(out);
    return result;
}

} // namespace fipsim
