#ifndef CHAINORDER_FACE_LATTICE_HPP
#define CHAINORDER_FACE_LATTICE_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitset.hpp"
#include "exact.hpp"
#include "polytope.hpp"

namespace chainorder {

/// Vertex-facet incidences of a double description. Equations are not columns.
struct IncidenceMatrix {
    std::size_t vertex_count = 0;
    std::size_t facet_count = 0;
    std::vector<DynamicBitset> vertex_facets;  // per vertex: facets it lies on
    std::vector<DynamicBitset> facet_vertices; // per facet: vertices on it
};

inline IncidenceMatrix incidence_matrix(const VRep& v, const HRep& h) {
    IncidenceMatrix inc;
    inc.vertex_count = v.size();
    inc.facet_count = h.ineqs.size();
    inc.vertex_facets.assign(inc.vertex_count, DynamicBitset(inc.facet_count));
    inc.facet_vertices.assign(inc.facet_count, DynamicBitset(inc.vertex_count));
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& x = v.vertices[i];
        if (x.size() != h.dim()) throw std::invalid_argument("incidence_matrix: vertex dimension mismatch");
        for (std::size_t f = 0; f < h.ineqs.size(); ++f) {
            auto val = h.ineqs[f].eval(x);
            if (val > h.ineqs[f].rhs)
                throw std::domain_error("incidence_matrix: vertex " + std::to_string(i) + " violates inequality " +
                                        std::to_string(f));
            if (val == h.ineqs[f].rhs) {
                inc.vertex_facets[i].set(f);
                inc.facet_vertices[f].set(i);
            }
        }
        for (const auto& e : h.eqs)
            if (e.eval(x) != e.rhs)
                throw std::domain_error("incidence_matrix: vertex " + std::to_string(i) + " violates an equation");
    }
    return inc;
}

/// Rows of h that are not tight on an affinely (dim-1)-dimensional set of vertices.
inline std::vector<std::size_t> non_facet_rows(const VRep& v, const HRep& h) {
    auto inc = incidence_matrix(v, h);
    std::vector<std::size_t> bad;
    if (v.size() == 0) return bad;
    const std::size_t d = affine_rank(v.vertices);
    for (std::size_t f = 0; f < inc.facet_count; ++f) {
        std::vector<Point> pts;
        inc.facet_vertices[f].for_each([&](std::size_t i) { pts.push_back(v.vertices[i]); });
        if (pts.empty() || affine_rank(pts) + 1 != d) bad.push_back(f);
    }
    return bad;
}

/// Thrown when the closure lattice is not graded, which means the incidences are inconsistent.
class NotGraded : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Face lattice keyed by vertex sets. faces[0] is the empty face; the last face is the polytope.
struct FaceLattice {
    std::vector<DynamicBitset> faces;
    std::vector<int> dim;                    // -1 for the empty face
    std::vector<std::pair<int, int>> covers; // (lower, upper) Hasse edges

    std::size_t size() const noexcept { return faces.size(); }
    int dimension() const { return dim.back(); }
};

namespace detail {

// cl(S) for S with facet set `facets`: vertices lying on every facet of the set.
inline void closure_from_facets(const IncidenceMatrix& inc, const DynamicBitset& facets, DynamicBitset& out) {
    out.set_all();
    facets.for_each([&](std::size_t f) { out &= inc.facet_vertices[f]; });
}

}  // namespace detail

/// Closure of a vertex set: all vertices tight on every facet tight on the whole set.
inline DynamicBitset closure(const IncidenceMatrix& inc, const DynamicBitset& vertices) {
    if (vertices.none()) return vertices;
    DynamicBitset facets(inc.facet_count, true);
    vertices.for_each([&](std::size_t v) { facets &= inc.vertex_facets[v]; });
    DynamicBitset out(inc.vertex_count);
    detail::closure_from_facets(inc, facets, out);
    return out;
}

/// Enumerates all faces layer by layer. A closure G = cl(H + v) covers H exactly when
/// every vertex of G \ H generates G, which is detected by counting generators.
inline FaceLattice enumerate_faces(const IncidenceMatrix& inc, std::uint64_t max_faces = 50'000'000) {
    const std::size_t nv = inc.vertex_count;
    FaceLattice fl;
    std::vector<DynamicBitset> face_facets;
    std::unordered_map<DynamicBitset, int, DynamicBitsetHash> index;

    fl.faces.emplace_back(nv);
    fl.dim.push_back(-1);
    face_facets.emplace_back(inc.facet_count, true);
    index.emplace(fl.faces[0], 0);

    std::vector<int> layer{0};
    int layer_dim = -1;

    struct Candidate {
        DynamicBitset vertices;
        DynamicBitset facets;
        std::size_t hash;
        std::size_t generators;
    };
    std::vector<Candidate> cands;
    DynamicBitset fprime(inc.facet_count), g(nv);

    while (!layer.empty()) {
        std::unordered_map<DynamicBitset, int, DynamicBitsetHash> next_index;
        std::vector<DynamicBitset> next_faces, next_facets;
        std::vector<std::pair<int, int>> pending;  // (parent id, local child index)

        for (int h : layer) {
            const DynamicBitset hv = fl.faces[static_cast<std::size_t>(h)];
            const DynamicBitset hf = face_facets[static_cast<std::size_t>(h)];
            std::size_t used = 0;
            for (std::size_t v = 0; v < nv; ++v) {
                if (hv.test(v)) continue;
                fprime = hf;
                fprime &= inc.vertex_facets[v];
                detail::closure_from_facets(inc, fprime, g);
                std::size_t hg = g.hash();
                bool found = false;
                for (std::size_t c = 0; c < used; ++c)
                    if (cands[c].hash == hg && cands[c].vertices == g) {
                        ++cands[c].generators;
                        found = true;
                        break;
                    }
                if (!found) {
                    if (used == cands.size()) cands.push_back({g, fprime, hg, 1});
                    else cands[used] = {g, fprime, hg, 1};
                    ++used;
                }
            }
            const std::size_t hsize = hv.count();
            for (std::size_t c = 0; c < used; ++c) {
                if (cands[c].generators != cands[c].vertices.count() - hsize) continue;
                if (index.count(cands[c].vertices))
                    throw NotGraded("face reached at two different ranks; incidences are inconsistent");
                auto [it, inserted] = next_index.emplace(cands[c].vertices, static_cast<int>(next_faces.size()));
                if (inserted) {
                    next_faces.push_back(cands[c].vertices);
                    next_facets.push_back(cands[c].facets);
                    if (fl.faces.size() + next_faces.size() > max_faces)
                        throw BudgetExceeded("enumerate_faces: more than " + std::to_string(max_faces) + " faces");
                }
                pending.emplace_back(h, it->second);
            }
        }

        if (layer_dim == -1)
            for (const auto& f : next_faces)
                if (f.count() != 1) throw NotGraded("a minimal nonempty face has more than one vertex");

        std::vector<int> order(next_faces.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return next_faces[a] < next_faces[b]; });
        std::vector<int> global(next_faces.size());
        layer.clear();
        for (int local : order) {
            int id = static_cast<int>(fl.faces.size());
            global[local] = id;
            fl.faces.push_back(next_faces[local]);
            fl.dim.push_back(layer_dim + 1);
            face_facets.push_back(next_facets[local]);
            index.emplace(next_faces[local], id);
            layer.push_back(id);
        }
        for (auto [parent, local] : pending) fl.covers.emplace_back(parent, global[local]);
        ++layer_dim;
    }

    std::sort(fl.covers.begin(), fl.covers.end());
    if (nv > 0 && fl.faces.back().count() != nv) throw NotGraded("face lattice has no unique top element");
    return fl;
}

/// (f_0, ..., f_{d-1}); the empty face and the polytope itself are excluded.
/// A point is reported as (1).
inline std::vector<std::uint64_t> f_vector(const FaceLattice& fl) {
    const int d = fl.dimension();
    if (d == 0) return {1};
    std::vector<std::uint64_t> f(static_cast<std::size_t>(std::max(d, 0)), 0);
    for (int x : fl.dim)
        if (x >= 0 && x < d) ++f[static_cast<std::size_t>(x)];
    return f;
}

/// Alternating sum of f equals 1 - (-1)^d for a d-polytope with d >= 1.
inline bool euler_relation_holds(const std::vector<std::uint64_t>& f) {
    const auto d = static_cast<std::int64_t>(f.size());
    std::int64_t s = 0;
    for (std::int64_t i = 0; i < d; ++i) s += (i % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(f[static_cast<std::size_t>(i)]);
    return s == 1 - (d % 2 == 0 ? 1 : -1);
}

/// Vertex coordinates of one face.
inline std::vector<Point> face_points(const FaceLattice& fl, std::size_t face, const VRep& v) {
    std::vector<Point> pts;
    fl.faces[face].for_each([&](std::size_t i) { pts.push_back(v.vertices[i]); });
    return pts;
}

/// Geometric pipeline end to end.
inline std::vector<std::uint64_t> geometric_f_vector(const VRep& v, const HRep& h, std::uint64_t max_faces = 50'000'000) {
    return f_vector(enumerate_faces(incidence_matrix(v, h), max_faces));
}

}  // namespace chainorder

#endif  // CHAINORDER_FACE_LATTICE_HPP
