// closure.cpp -- FormulaSet operations and the Fischer-Ladner closure.

#include "tpdl/closure.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

namespace tpdl {

bool fs_contains(const FormulaSet& s, const Formula* f) {
    auto it = std::lower_bound(s.begin(), s.end(), f, schedule_less);
    return it != s.end() && *it == f;
}

FormulaSet fs_insert(FormulaSet s, const Formula* f) {
    auto it = std::lower_bound(s.begin(), s.end(), f, schedule_less);
    if (it == s.end() || *it != f) s.insert(it, f);
    return s;
}

FormulaSet fs_erase(FormulaSet s, const Formula* f) {
    auto it = std::lower_bound(s.begin(), s.end(), f, schedule_less);
    if (it != s.end() && *it == f) s.erase(it);
    return s;
}

FormulaSet fs_make(std::initializer_list<const Formula*> items) {
    FormulaSet out;
    for (const Formula* f : items) out = fs_insert(std::move(out), f);
    return out;
}

bool fs_intersects(const FormulaSet& a, const FormulaSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return true;
        if (schedule_less(*i, *j)) ++i;
        else ++j;
    }
    return false;
}

bool fs_subset(const FormulaSet& a, const FormulaSet& b) {
    auto j = b.begin();
    for (const Formula* f : a) {
        while (j != b.end() && schedule_less(*j, f)) ++j;
        if (j == b.end() || *j != f) return false;
        ++j;
    }
    return true;
}

FormulaSet fs_union(const FormulaSet& a, const FormulaSet& b) {
    FormulaSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
                   schedule_less);
    return out;
}

FormulaSet fs_intersection(const FormulaSet& a, const FormulaSet& b) {
    FormulaSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out), schedule_less);
    return out;
}

FormulaSet fs_difference(const FormulaSet& a, const FormulaSet& b) {
    FormulaSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out), schedule_less);
    return out;
}

FormulaSet default_schedule(const FormulaSet& items) {
    FormulaSet out = items;
    std::sort(out.begin(), out.end(), schedule_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// fl/fl_box are memoized per interned handle; computation happens outside the
// lock, so a formula may occasionally be computed twice, which is harmless.
std::unordered_map<const Formula*, FormulaSet> fl_memo;
std::unordered_map<const Formula*, FormulaSet> fl_box_memo;
std::mutex memo_mutex;

const FormulaSet* memo_lookup(std::unordered_map<const Formula*, FormulaSet>& memo,
                              const Formula* f) {
    std::lock_guard<std::mutex> lock(memo_mutex);
    auto it = memo.find(f);
    return it == memo.end() ? nullptr : &it->second;
}

const FormulaSet& memo_store(std::unordered_map<const Formula*, FormulaSet>& memo,
                             const Formula* f, FormulaSet value) {
    std::lock_guard<std::mutex> lock(memo_mutex);
    return memo.emplace(f, std::move(value)).first->second;
}

}  // namespace

FormulaSet fl_box(const Formula* f) {
    if (f->kind != FKind::Box && f->kind != FKind::RevBox) return {};
    if (const FormulaSet* hit = memo_lookup(fl_box_memo, f)) return *hit;

    const Program* prog = f->prog;
    const Formula* body = f->body;
    bool rev = f->kind == FKind::RevBox;
    auto rebox = [rev](const Program* p, const Formula* g) {
        return rev ? f_revbox(p, g) : f_box(p, g);
    };

    FormulaSet out = fs_make({f});
    switch (prog->kind) {
        case PKind::Atom:
            break;
        case PKind::Seq:
            // [p;q]g unfolds to [p][q]g; the reverse box swaps the order.
            if (!rev) {
                out = fs_union(out, fl_box(f_box(prog->lhs, f_box(prog->rhs, body))));
                out = fs_union(out, fl_box(f_box(prog->rhs, body)));
            } else {
                out = fs_union(out,
                               fl_box(f_revbox(prog->rhs, f_revbox(prog->lhs, body))));
                out = fs_union(out, fl_box(f_revbox(prog->lhs, body)));
            }
            break;
        case PKind::Choice:
            out = fs_union(out, fl_box(rebox(prog->lhs, body)));
            out = fs_union(out, fl_box(rebox(prog->rhs, body)));
            break;
        case PKind::Star:
            out = fs_union(out, fl_box(rebox(prog->sub, f)));
            break;
        case PKind::Test:
            out = fs_union(out, fl(prog->test));
            break;
    }
    return memo_store(fl_box_memo, f, std::move(out));
}

FormulaSet fl(const Formula* f) {
    if (const FormulaSet* hit = memo_lookup(fl_memo, f)) return *hit;

    FormulaSet out;
    switch (f->kind) {
        case FKind::False:
        case FKind::Prop:
            out = fs_make({f});
            break;
        case FKind::Implies:
            out = fs_insert(fs_union(fl(f->lhs), fl(f->rhs)), f);
            break;
        case FKind::Box:
        case FKind::RevBox:
            out = fs_union(fl_box(f), fl(f->body));
            break;
    }
    return memo_store(fl_memo, f, std::move(out));
}

FormulaSet fl_set(const FormulaSet& items) {
    FormulaSet out;
    for (const Formula* f : items) out = fs_union(out, fl(f));
    return out;
}

bool is_reducible_shape(const Formula* f) {
    if (f->kind == FKind::Implies) return true;
    if (f->kind != FKind::Box) return false;
    return f->prog->kind != PKind::Atom;
}

FormulaSet reducible(const FormulaSet& items) {
    FormulaSet out;
    for (const Formula* f : items)
        if (is_reducible_shape(f)) out.push_back(f);
    return out;
}

}  // namespace tpdl
