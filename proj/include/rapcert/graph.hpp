#pragma once

#include <algorithm>
#include <vector>

#include "rapcert/eigen.hpp"
#include "rapcert/matrix.hpp"

namespace rapcert {

namespace detail {

// Edge i -> j iff c(i,j) != 0. On the sign-constrained nonnegative inputs of
// the obstruction machinery this is the same as "> 0"; keying on the nonzero
// pattern also lets structure-only queries run on signed matrices.
inline std::vector<std::vector<int>> adjacency(const Matrix& c) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(c.rows()));
    for (int i = 0; i < c.rows(); ++i)
        for (int j = 0; j < c.cols(); ++j)
            if (c(i, j) != 0.0) adj[static_cast<std::size_t>(i)].push_back(j);
    return adj;
}

}  // namespace detail

struct Restriction {
    Vec alpha;
    Matrix c;
    std::vector<int> kept;  // original indices retained, ascending
};

// Restrict (alpha, c) to the states reachable in the digraph of c from the
// support of alpha. The sequence alpha * c^k * 1 is unchanged.
inline Restriction reachable_restriction(const Vec& alpha, const Matrix& c) {
    if (!c.square()) throw StructuralError("reachable_restriction: matrix not square");
    const int n = c.rows();
    if (static_cast<int>(alpha.size()) != n)
        throw StructuralError("reachable_restriction: alpha length mismatch");
    for (double v : alpha)
        if (v < 0) throw StructuralError("reachable_restriction: alpha has negative entries");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (c(i, j) < 0) throw StructuralError("reachable_restriction: c has negative entries");

    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    for (int i = 0; i < n; ++i)
        if (alpha[static_cast<std::size_t>(i)] > 0) {
            seen[static_cast<std::size_t>(i)] = 1;
            stack.push_back(i);
        }
    if (stack.empty()) throw DomainError("reachable_restriction: alpha has empty support");

    const auto adj = detail::adjacency(c);
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int j : adj[static_cast<std::size_t>(i)])
            if (!seen[static_cast<std::size_t>(j)]) {
                seen[static_cast<std::size_t>(j)] = 1;
                stack.push_back(j);
            }
    }

    Restriction r;
    for (int i = 0; i < n; ++i)
        if (seen[static_cast<std::size_t>(i)]) r.kept.push_back(i);
    const int m = static_cast<int>(r.kept.size());
    r.alpha.resize(static_cast<std::size_t>(m));
    r.c = Matrix(m, m);
    for (int i = 0; i < m; ++i) {
        r.alpha[static_cast<std::size_t>(i)] = alpha[static_cast<std::size_t>(r.kept[static_cast<std::size_t>(i)])];
        for (int j = 0; j < m; ++j)
            r.c(i, j) = c(r.kept[static_cast<std::size_t>(i)], r.kept[static_cast<std::size_t>(j)]);
    }
    return r;
}

struct FrobeniusDecomposition {
    std::vector<int> block_order;           // permutation of 0..n-1, blocks concatenated
    std::vector<std::vector<int>> blocks;   // strongly connected components, topological order
    std::vector<double> block_spectral_radii;
    double spectral_radius = 0.0;
};

// Strongly connected components of the digraph of c (Tarjan), ordered so the
// permuted matrix is block upper triangular; per-block spectral radii from the
// eigenvalue kernel applied to each diagonal block of c itself.
inline FrobeniusDecomposition frobenius_decomposition(const Matrix& c) {
    if (!c.square()) throw StructuralError("frobenius_decomposition: matrix not square");
    const int n = c.rows();
    const auto adj = detail::adjacency(c);

    std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
    std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int counter = 0;

    // Iterative Tarjan; frame = (vertex, next edge position).
    std::vector<std::pair<int, std::size_t>> frames;
    for (int root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != -1) continue;
        frames.emplace_back(root, 0);
        while (!frames.empty()) {
            const int v = frames.back().first;
            std::size_t pos = frames.back().second;
            if (pos == 0) {
                index[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = counter++;
                stack.push_back(v);
                on_stack[static_cast<std::size_t>(v)] = 1;
            }
            bool descended = false;
            while (pos < adj[static_cast<std::size_t>(v)].size()) {
                const int w = adj[static_cast<std::size_t>(v)][pos];
                ++pos;
                if (index[static_cast<std::size_t>(w)] == -1) {
                    frames.back().second = pos;
                    frames.emplace_back(w, 0);
                    descended = true;
                    break;
                }
                if (on_stack[static_cast<std::size_t>(w)])
                    low[static_cast<std::size_t>(v)] =
                        std::min(low[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(w)]);
            }
            if (descended) continue;
            if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
                std::vector<int> comp;
                for (;;) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = 0;
                    comp.push_back(w);
                    if (w == v) break;
                }
                std::sort(comp.begin(), comp.end());
                sccs.push_back(std::move(comp));
            }
            const int finished = v;
            frames.pop_back();
            if (!frames.empty()) {
                const int parent = frames.back().first;
                low[static_cast<std::size_t>(parent)] =
                    std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(finished)]);
            }
        }
    }

    // Tarjan emits components in reverse topological order of the condensation.
    std::reverse(sccs.begin(), sccs.end());

    FrobeniusDecomposition out;
    out.blocks = std::move(sccs);
    for (const auto& blk : out.blocks) {
        const int m = static_cast<int>(blk.size());
        Matrix sub(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                sub(i, j) = c(blk[static_cast<std::size_t>(i)], blk[static_cast<std::size_t>(j)]);
        const double rho = eigenvalues(sub).spectral_radius;
        out.block_spectral_radii.push_back(rho);
        out.spectral_radius = std::max(out.spectral_radius, rho);
        out.block_order.insert(out.block_order.end(), blk.begin(), blk.end());
    }
    return out;
}

}  // namespace rapcert
