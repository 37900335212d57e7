#include "ssc/s_topology.hpp"

#include <algorithm>

#include "ssc/error.hpp"
#include "ssc/random.hpp"

namespace ssc {

SetPredicate SetPredicate::negated() const {
    auto inner = contains;
    // complement of a component union is again a component union
    SetTag t = tag == SetTag::ComponentUnion ? SetTag::ComponentUnion : SetTag::BlackBox;
    return {[inner](const SparsePoint& x) { return !inner(x); }, t, "not(" + description + ")"};
}

SetPredicate whole_space() {
    return {[](const SparsePoint&) { return true; }, SetTag::ComponentUnion, "whole space"};
}

SetPredicate empty_set() {
    return {[](const SparsePoint&) { return false; }, SetTag::ComponentUnion, "empty set"};
}

SetPredicate component_union(std::set<AnchorId> anchors) {
    std::string desc = "components{";
    for (const auto& a : anchors) desc += a.str() + ",";
    desc += "}";
    return {[anchors = std::move(anchors)](const SparsePoint& x) { return anchors.contains(x.anchor); },
            SetTag::ComponentUnion, desc};
}

std::vector<Index> probe_indices(const SigmaSpace& space, const SparsePoint& x, std::size_t count,
                                 std::mt19937_64& rng) {
    std::vector<Index> support;
    for (const auto& kv : x.overrides) support.push_back(kv.first);
    for (const auto& kv : space.anchor(x.anchor).values) support.push_back(kv.first);
    Index top = space.max_relevant_index(x) + 8;
    std::vector<Index> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 2 == 0 && !support.empty())
            out.push_back(support[uniform_index(rng, 0, support.size() - 1)]);
        else
            out.push_back(uniform_index(rng, 1, top));
    }
    return out;
}

Verdict s_open_probe(const SigmaSpace& space, const SetPredicate& set,
                     const std::vector<SparsePoint>& sample, const MutationProbe& probe) {
    Rng rng(probe.seed);
    Verdict v;
    for (const auto& x : sample) {
        if (!set(x)) continue;
        for (Index t : probe_indices(space, x, probe.per_point_mutations, rng)) {
            for (double m : probe.magnitudes) {
                auto y = space.with_coordinate(x, t, scaled_add(CoordVector(space.family().at(t).dim, 0.0), m,
                                                                random_unit_vector(space.family().at(t), rng)));
                ++v.checks;
                if (!set(y)) {
                    v.status = Status::Counterexample;
                    v.certainty = Certainty::Certified;
                    v.x = x;
                    v.y = std::move(y);
                    return v;
                }
            }
        }
    }
    if (set.tag == SetTag::ComponentUnion) v.certainty = Certainty::Certified;
    return v;
}

ComplementReport complement_closure_check(const SigmaSpace& space, const SetPredicate& set,
                                          const std::vector<SparsePoint>& sample,
                                          const MutationProbe& probe) {
    ComplementReport r;
    r.direct = s_open_probe(space, set, sample, probe);
    MutationProbe other = probe;
    other.seed = derive_seed(probe.seed, 1);
    r.complement = s_open_probe(space, set.negated(), sample, other);
    r.consistent = r.direct.passed() == r.complement.passed();
    return r;
}

std::vector<std::vector<SparsePoint>> component_partition(const SigmaSpace& space,
                                                          const std::vector<SparsePoint>& points) {
    std::vector<std::vector<SparsePoint>> groups;
    for (const auto& p : points) {
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return space.same_component(g.front(), p); });
        if (it == groups.end())
            groups.push_back({p});
        else
            it->push_back(p);
    }
    return groups;
}

Verdict projective_symmetry_check(const SigmaSpace& space, const SetPredicate& set,
                                  const SparsePoint& a, const std::vector<SparsePoint>& sample,
                                  const MutationProbe& probe) {
    Rng rng(probe.seed);
    Verdict v;
    for (const auto& x : sample) {
        if (!set(x)) continue;
        auto indices = probe_indices(space, x, probe.per_point_mutations, rng);
        for (const auto& kv : x.overrides) indices.push_back(kv.first);
        for (const auto& kv : a.overrides) indices.push_back(kv.first);
        for (Index t : indices) {
            auto y = space.splice_one(x, t, a);
            ++v.checks;
            if (!set(y)) {
                v.status = Status::Counterexample;
                v.certainty = Certainty::Certified;
                v.x = x;
                v.y = std::move(y);
                return v;
            }
        }
    }
    return v;
}

LimitReport coordinated_limit_check(const SigmaSpace& space, const SparsePoint& a, Index t,
                                    const BoxNeighborhood& target, std::vector<double> radius_grid,
                                    const MutationProbe& probe) {
    if (radius_grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty radius grid");
    std::sort(radius_grid.begin(), radius_grid.end(), std::greater<>());
    LimitReport report;
    if (!target.radii.contains(t)) {
        report.passed = true;
        report.vacuous = true;
        report.delta = radius_grid.front();
        return report;
    }
    const auto& cs = space.family().at(t);
    const auto at = space.coordinate(a, t);
    Rng rng(probe.seed);
    for (double delta : radius_grid) {
        bool ok = true;
        for (std::size_t k = 0; ok && k < probe.per_point_mutations * 8; ++k) {
            // half the probes sit right under the boundary of the δ-ball
            double frac = k % 2 == 0 ? 1.0 - 1e-9 : uniform(rng, 0.0, 1.0);
            auto v = scaled_add(at, delta * frac, random_unit_vector(cs, rng));
            if (!(space.norm_at(t, subtract(v, at)) < delta)) continue;
            ok = space.box_contains(target, space.with_coordinate(a, t, std::move(v)));
        }
        if (ok) {
            report.passed = true;
            report.delta = delta;
            return report;
        }
    }
    return report;
}

SparsePoint density_witness(const SigmaSpace& space, const SparsePoint& representative,
                            const BoxNeighborhood& box) {
    std::set<Index> constrained;
    for (const auto& kv : box.radii) constrained.insert(kv.first);
    return space.splice(representative, constrained, box.center);
}

}  // namespace ssc
