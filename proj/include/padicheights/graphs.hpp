#pragma once

// Finite connected multigraphs without self-loops, their cochain complex over
// Q_p, harmonic decomposition, pointwise products and cycle bases.

#include <cstddef>
#include <span>
#include <vector>

#include "padicheights/padic.hpp"

namespace padicheights::graphs {

using padic::Field;
using padic::PadicNumber;

/// An edge in its canonical orientation, tail -> head. The reverse edge is
/// implicit and carries the negated value of any 1-cochain.
struct Edge {
    std::size_t tail = 0;
    std::size_t head = 0;
};

class Graph {
public:
    Graph() = default;
    /// Validates vertex indices, absence of self-loops and connectivity.
    Graph(std::size_t vertex_count, std::vector<Edge> edges);

    std::size_t vertex_count() const { return vertex_count_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(std::size_t e) const { return edges_.at(e); }
    /// Edges with the given vertex as head or tail.
    const std::vector<std::size_t>& incident(std::size_t v) const { return incident_.at(v); }
    /// First Betti number |E| - |V| + 1.
    std::size_t betti_number() const { return edges_.size() + 1 - vertex_count_; }

    /// BFS spanning tree from vertex 0: parent edge per vertex (root has none).
    const std::vector<std::ptrdiff_t>& tree_parent_edge() const { return parent_edge_; }
    const std::vector<std::size_t>& bfs_order() const { return bfs_order_; }
    bool is_tree_edge(std::size_t e) const { return tree_edge_.at(e); }

private:
    std::size_t vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> incident_;
    std::vector<std::ptrdiff_t> parent_edge_;
    std::vector<std::size_t> bfs_order_;
    std::vector<bool> tree_edge_;
};

/// Values on vertices.
struct Cochain0 {
    std::vector<PadicNumber> values;

    static Cochain0 zero(Field f, std::size_t n) { return Cochain0{std::vector<PadicNumber>(n, PadicNumber::zero(f))}; }
    std::size_t size() const { return values.size(); }
    PadicNumber& operator[](std::size_t v) { return values.at(v); }
    const PadicNumber& operator[](std::size_t v) const { return values.at(v); }
};

/// Values on canonically oriented edges; the reversed edge carries the negative.
struct Cochain1 {
    std::vector<PadicNumber> values;

    static Cochain1 zero(Field f, std::size_t n) { return Cochain1{std::vector<PadicNumber>(n, PadicNumber::zero(f))}; }
    std::size_t size() const { return values.size(); }
    PadicNumber& operator[](std::size_t e) { return values.at(e); }
    const PadicNumber& operator[](std::size_t e) const { return values.at(e); }
    /// Value on the edge traversed forwards (+1) or backwards (-1).
    PadicNumber oriented(std::size_t e, int sign) const { return sign > 0 ? values.at(e) : -values.at(e); }

    Cochain1 operator-() const;
    friend Cochain1 operator+(const Cochain1& a, const Cochain1& b);
    friend Cochain1 operator-(const Cochain1& a, const Cochain1& b);
    friend Cochain1 operator*(const PadicNumber& s, const Cochain1& a);
};

bool same_to_precision(const Cochain1& a, const Cochain1& b);
bool agrees(const Cochain1& a, const Cochain1& b, int digits);
bool is_zero(const Cochain0& c);
bool is_zero(const Cochain1& c);

/// df(e) = f(head) - f(tail).
Cochain1 coboundary(const Graph& g, const Cochain0& f);
/// d*c(v) = sum of c over edges oriented into v.
Cochain0 costar(const Graph& g, const Cochain1& c);

struct HarmonicDecomposition {
    Cochain1 harmonic;
    Cochain0 potential;
};

/// d*(c / length) with the given positive edge lengths (all 1 when empty).
Cochain0 weighted_costar(const Graph& g, const Cochain1& c, std::span<const long long> lengths);
/// c = h + df with f(vertex 0) = 0 and h harmonic: d*(h / length) = 0.
/// Without lengths every edge has length 1 and this is d*h = 0.
HarmonicDecomposition harmonic_project(const Graph& g, const Cochain1& c, std::span<const long long> lengths = {});

/// Sum over unoriented edges of c(e) d(e).
PadicNumber pointwise_product(const Cochain1& c, const Cochain1& d);
/// Product of classes: the harmonic representative of c against d.
PadicNumber cohomology_product(const Graph& g, const Cochain1& c, const Cochain1& d,
                               std::span<const long long> lengths = {});

/// One integral cycle indicator per edge outside the BFS spanning tree; each
/// is harmonic and takes the value 1 on its defining edge.
std::vector<Cochain1> cycle_basis(const Graph& g, Field f);

/// A cochain supported on the spanning tree with d*c = target. The target
/// must sum to zero.
Cochain1 tree_flow(const Graph& g, const Cochain0& target);

}  // namespace padicheights::graphs
