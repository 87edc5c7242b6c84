#include "padicheights/graphs.hpp"

#include <queue>

namespace padicheights::graphs {

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)), incident_(vertex_count) {
    if (vertex_count == 0) throw InvariantViolation("graph has no vertices");
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (e.tail >= vertex_count || e.head >= vertex_count) {
            throw InvariantViolation("edge " + std::to_string(i) + " refers to a missing vertex");
        }
        if (e.tail == e.head) {
            throw InvariantViolation("edge " + std::to_string(i) + " is a self-loop; subdivide it first");
        }
        incident_[e.tail].push_back(i);
        incident_[e.head].push_back(i);
    }
    parent_edge_.assign(vertex_count, -1);
    tree_edge_.assign(edges_.size(), false);
    std::vector<bool> seen(vertex_count, false);
    std::queue<std::size_t> queue;
    queue.push(0);
    seen[0] = true;
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop();
        bfs_order_.push_back(v);
        for (std::size_t e : incident_[v]) {
            std::size_t w = edges_[e].tail == v ? edges_[e].head : edges_[e].tail;
            if (seen[w]) continue;
            seen[w] = true;
            parent_edge_[w] = static_cast<std::ptrdiff_t>(e);
            tree_edge_[e] = true;
            queue.push(w);
        }
    }
    if (bfs_order_.size() != vertex_count) throw InvariantViolation("graph is not connected");
}

Cochain1 Cochain1::operator-() const {
    Cochain1 r = *this;
    for (auto& x : r.values) x = -x;
    return r;
}

Cochain1 operator+(const Cochain1& a, const Cochain1& b) {
    if (a.size() != b.size()) throw Error("cochain size mismatch");
    Cochain1 r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.values[i] += b.values[i];
    return r;
}

Cochain1 operator-(const Cochain1& a, const Cochain1& b) { return a + (-b); }

Cochain1 operator*(const PadicNumber& s, const Cochain1& a) {
    Cochain1 r = a;
    for (auto& x : r.values) x = s * x;
    return r;
}

bool same_to_precision(const Cochain1& a, const Cochain1& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!padic::same_to_precision(a[i], b[i])) return false;
    }
    return true;
}

bool agrees(const Cochain1& a, const Cochain1& b, int digits) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!padic::agrees(a[i], b[i], digits)) return false;
    }
    return true;
}

bool is_zero(const Cochain0& c) {
    for (const auto& x : c.values) {
        if (!x.is_zero()) return false;
    }
    return true;
}

bool is_zero(const Cochain1& c) {
    for (const auto& x : c.values) {
        if (!x.is_zero()) return false;
    }
    return true;
}

Cochain1 coboundary(const Graph& g, const Cochain0& f) {
    if (f.size() != g.vertex_count()) throw Error("0-cochain size does not match the graph");
    Cochain1 r;
    r.values.reserve(g.edge_count());
    for (const Edge& e : g.edges()) r.values.push_back(f[e.head] - f[e.tail]);
    return r;
}

Cochain0 costar(const Graph& g, const Cochain1& c) {
    if (c.size() != g.edge_count()) throw Error("1-cochain size does not match the graph");
    if (c.size() == 0) throw Error("costar of an empty cochain needs a field");
    Cochain0 r = Cochain0::zero(c[0].field(), g.vertex_count());
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        r[g.edge(i).head] += c[i];
        r[g.edge(i).tail] -= c[i];
    }
    return r;
}

namespace {

std::vector<long long> checked_lengths(const Graph& g, std::span<const long long> lengths) {
    if (lengths.empty()) return std::vector<long long>(g.edge_count(), 1);
    if (lengths.size() != g.edge_count()) throw Error("one length per edge is required");
    for (long long l : lengths) {
        if (l < 1) throw InputError("edge lengths must be positive");
    }
    return {lengths.begin(), lengths.end()};
}

}  // namespace

Cochain0 weighted_costar(const Graph& g, const Cochain1& c, std::span<const long long> lengths) {
    const auto len = checked_lengths(g, lengths);
    Cochain1 scaled = c;
    for (std::size_t e = 0; e < c.size(); ++e) {
        if (len[e] != 1) scaled[e] = c[e] / PadicNumber::integer(c[e].field(), len[e]);
    }
    return costar(g, scaled);
}

HarmonicDecomposition harmonic_project(const Graph& g, const Cochain1& c, std::span<const long long> lengths) {
    const std::size_t n = g.vertex_count();
    if (c.size() != g.edge_count()) throw Error("1-cochain size does not match the graph");
    if (g.edge_count() == 0) return {c, Cochain0{}};
    const auto len = checked_lengths(g, lengths);
    const Field f = c[0].field();
    Cochain0 potential = Cochain0::zero(f, n);
    if (n > 1) {
        // Reduced Laplacian with conductances 1/length on vertices 1..n-1, f(0) = 0.
        const Cochain0 rhs = weighted_costar(g, c, len);
        padic::PadicMatrix lap(f, n - 1, n - 1);
        padic::PadicMatrix b(f, n - 1, 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = 0; j + 1 < n; ++j) lap(i, j) = PadicNumber::zero(f);
        }
        for (std::size_t e = 0; e < g.edge_count(); ++e) {
            const Edge& ed = g.edge(e);
            const PadicNumber w = PadicNumber::rational(f, mpz_class(1), mpz_class(static_cast<long>(len[e])));
            for (std::size_t a : {ed.head, ed.tail}) {
                if (a == 0) continue;
                lap(a - 1, a - 1) += w;
                const std::size_t other = a == ed.head ? ed.tail : ed.head;
                if (other != 0) lap(a - 1, other - 1) -= w;
            }
        }
        for (std::size_t i = 1; i < n; ++i) b(i - 1, 0) = rhs[i];
        auto sol = padic::solve_linear(lap, b);
        for (std::size_t i = 1; i < n; ++i) potential[i] = sol.solution(i - 1, 0);
    }
    return {c - coboundary(g, potential), potential};
}

PadicNumber pointwise_product(const Cochain1& c, const Cochain1& d) {
    if (c.size() != d.size()) throw Error("cochain size mismatch in pointwise product");
    if (c.size() == 0) throw Error("pointwise product of empty cochains needs a field");
    PadicNumber s = PadicNumber::zero(c[0].field());
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * d[i];
    return s;
}

PadicNumber cohomology_product(const Graph& g, const Cochain1& c, const Cochain1& d,
                               std::span<const long long> lengths) {
    return pointwise_product(harmonic_project(g, c, lengths).harmonic, d);
}

std::vector<Cochain1> cycle_basis(const Graph& g, Field f) {
    const auto& parent = g.tree_parent_edge();
    std::vector<std::size_t> depth(g.vertex_count(), 0);
    for (std::size_t v : g.bfs_order()) {
        if (parent[v] < 0) continue;
        const Edge& pe = g.edge(static_cast<std::size_t>(parent[v]));
        depth[v] = depth[pe.tail == v ? pe.head : pe.tail] + 1;
    }
    auto up = [&](std::size_t v) {
        const Edge& pe = g.edge(static_cast<std::size_t>(parent[v]));
        return pe.tail == v ? pe.head : pe.tail;
    };
    std::vector<Cochain1> basis;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (g.is_tree_edge(e)) continue;
        std::vector<long long> gamma(g.edge_count(), 0);
        gamma[e] = 1;
        // Walk back from head to tail through the tree.
        std::size_t a = g.edge(e).head;
        std::size_t b = g.edge(e).tail;
        while (a != b) {
            if (depth[a] >= depth[b]) {
                const auto pe = static_cast<std::size_t>(parent[a]);
                std::size_t next = up(a);
                gamma[pe] += g.edge(pe).tail == a ? 1 : -1;
                a = next;
            } else {
                const auto pe = static_cast<std::size_t>(parent[b]);
                std::size_t next = up(b);
                // This half is walked from the tail side, so the traversal runs next -> b.
                gamma[pe] += g.edge(pe).tail == next ? 1 : -1;
                b = next;
            }
        }
        Cochain1 c;
        for (long long x : gamma) c.values.push_back(PadicNumber::integer(f, x));
        basis.push_back(std::move(c));
    }
    return basis;
}

Cochain1 tree_flow(const Graph& g, const Cochain0& target) {
    if (target.size() != g.vertex_count()) throw Error("target size does not match the graph");
    const Field f = target[0].field();
    PadicNumber total = PadicNumber::zero(f);
    for (const auto& x : target.values) total += x;
    if (!total.is_zero()) throw Inconsistent("flow target does not sum to zero");
    Cochain1 c = Cochain1::zero(f, g.edge_count());
    std::vector<PadicNumber> subtree(target.values);
    const auto& order = g.bfs_order();
    for (std::size_t i = order.size(); i-- > 1;) {
        const std::size_t v = order[i];
        const auto pe = static_cast<std::size_t>(g.tree_parent_edge()[v]);
        const Edge& e = g.edge(pe);
        c[pe] = e.head == v ? subtree[v] : -subtree[v];
        subtree[e.head == v ? e.tail : e.head] += subtree[v];
    }
    return c;
}

}  // namespace padicheights::graphs
