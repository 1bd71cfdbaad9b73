//! Brute-force optimum oracle: build the compatibility graph on all vectors
//! of a given composition (edge iff distance >= d) and find a maximum clique
//! exactly (branch-and-bound with a greedy coloring bound), or a best-effort
//! witness clique under a budget.
//!
//! Vertex order is lexicographic on support tuples, so exact results and
//! witnesses are reproducible.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codes::{sparse_distance, Code, Codeword, Composition};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    Exact,
    /// Best clique found within the budget; a lower bound on the optimum.
    WitnessOnly { iterations: u64, seed: u64 },
}

/// All codewords of length `n` with the given composition, in lexicographic
/// support-tuple order.
pub fn enumerate_words(n: u32, comp: &Composition) -> Vec<Codeword> {
    let w = comp.weight() as usize;
    let mut words = Vec::new();
    let mut positions = vec![0u32; w];
    // iterate over all w-subsets of 0..n
    fn subsets(
        n: u32,
        w: usize,
        start: u32,
        positions: &mut Vec<u32>,
        depth: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        if depth == w {
            out.push(positions.clone());
            return;
        }
        for p in start..n {
            positions[depth] = p;
            subsets(n, w, p + 1, positions, depth + 1, out);
        }
    }
    let mut supports = Vec::new();
    subsets(n, w, 0, &mut positions, 0, &mut supports);

    // all distinct assignments of the symbol multiset onto the support
    let mut symbols: Vec<u8> = Vec::new();
    for (i, &count) in comp.weights().iter().enumerate() {
        symbols.extend(std::iter::repeat(i as u8 + 1).take(count as usize));
    }
    let assignments = distinct_permutations(&symbols);

    for support in supports {
        for assign in &assignments {
            let pairs: Vec<(u32, u8)> = support.iter().copied().zip(assign.iter().copied()).collect();
            words.push(Codeword::new(n, pairs).expect("valid enumerated word"));
        }
    }
    words.sort_unstable_by(|a, b| a.support().cmp(b.support()));
    words
}

fn distinct_permutations(symbols: &[u8]) -> Vec<Vec<u8>> {
    let mut sorted = symbols.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    loop {
        out.push(sorted.clone());
        // next_permutation
        let mut i = sorted.len().wrapping_sub(1);
        while i > 0 && sorted[i - 1] >= sorted[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = sorted.len() - 1;
        while sorted[j] <= sorted[i - 1] {
            j -= 1;
        }
        sorted.swap(i - 1, j);
        sorted[i..].reverse();
    }
    out
}

struct BitGraph {
    n: usize,
    words_per_row: usize,
    rows: Vec<u64>,
}

impl BitGraph {
    fn new(n: usize) -> Self {
        let words_per_row = (n + 63) / 64;
        BitGraph {
            n,
            words_per_row,
            rows: vec![0u64; n * words_per_row],
        }
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        self.rows[a * self.words_per_row + b / 64] |= 1 << (b % 64);
        self.rows[b * self.words_per_row + a / 64] |= 1 << (a % 64);
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words_per_row..(v + 1) * self.words_per_row]
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.rows[a * self.words_per_row + b / 64] >> (b % 64) & 1 == 1
    }
}

fn build_graph(words: &[Codeword], d: u32) -> BitGraph {
    let mut g = BitGraph::new(words.len());
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            if sparse_distance(words[i].support(), words[j].support()) >= d {
                g.add_edge(i, j);
            }
        }
    }
    g
}

struct Searcher<'a> {
    g: &'a BitGraph,
    best: Vec<usize>,
}

impl<'a> Searcher<'a> {
    /// Branch and bound with greedy coloring: candidates are colored
    /// greedily; a vertex whose color index plus the current clique size
    /// cannot beat the incumbent prunes the branch.
    fn expand(&mut self, clique: &mut Vec<usize>, candidates: Vec<usize>) {
        if candidates.is_empty() {
            if clique.len() > self.best.len() {
                self.best = clique.clone();
            }
            return;
        }
        // greedy coloring in candidate order
        let mut color_of = vec![0usize; candidates.len()];
        let mut color_classes: Vec<Vec<usize>> = Vec::new();
        for (ci, &v) in candidates.iter().enumerate() {
            let mut placed = false;
            for (color, class) in color_classes.iter_mut().enumerate() {
                if class.iter().all(|&u| !self.g.adjacent(u, v)) {
                    class.push(v);
                    color_of[ci] = color + 1;
                    placed = true;
                    break;
                }
            }
            if !placed {
                color_classes.push(vec![v]);
                color_of[ci] = color_classes.len();
            }
        }
        // visit in descending color
        let mut order: Vec<usize> = (0..candidates.len()).collect();
        order.sort_unstable_by_key(|&i| std::cmp::Reverse(color_of[i]));

        let mut active: Vec<bool> = vec![true; candidates.len()];
        for &ci in &order {
            let v = candidates[ci];
            if clique.len() + color_of[ci] <= self.best.len() {
                return;
            }
            clique.push(v);
            let next: Vec<usize> = candidates
                .iter()
                .enumerate()
                .filter(|&(cj, &u)| active[cj] && cj != ci && self.g.adjacent(v, u))
                .map(|(_, &u)| u)
                .collect();
            self.expand(clique, next);
            clique.pop();
            active[ci] = false;
        }
    }
}

fn exact_max_clique(g: &BitGraph) -> Vec<usize> {
    let mut s = Searcher { g, best: Vec::new() };
    // order vertices by descending degree for the root coloring
    let mut vertices: Vec<usize> = (0..g.n).collect();
    let degree = |v: usize| g.row(v).iter().map(|w| w.count_ones()).sum::<u32>();
    vertices.sort_unstable_by_key(|&v| std::cmp::Reverse(degree(v)));
    s.expand(&mut Vec::new(), vertices);
    s.best
}

/// Greedy construction plus plateau-swap local search.
fn witness_clique(g: &BitGraph, iterations: u64, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Vec<usize> = Vec::new();
    if g.n == 0 {
        return best;
    }
    let mut iter = 0u64;
    while iter < iterations {
        // randomized greedy start
        let mut order: Vec<usize> = (0..g.n).collect();
        order.shuffle(&mut rng);
        let mut clique: Vec<usize> = Vec::new();
        let mut in_clique = vec![false; g.n];
        // missing[v] = number of clique members v is not adjacent to
        let mut missing = vec![0u32; g.n];
        for &v in &order {
            if !in_clique[v] && missing[v] == 0 {
                add_vertex(g, v, &mut clique, &mut in_clique, &mut missing);
            }
        }
        // plateau search: add when possible, else swap 1-for-1
        let mut stall = 0u32;
        while iter < iterations && stall < 2_000 {
            iter += 1;
            let adds: Vec<usize> =
                (0..g.n).filter(|&v| !in_clique[v] && missing[v] == 0).collect();
            if let Some(&v) = adds.as_slice().choose(&mut rng) {
                add_vertex(g, v, &mut clique, &mut in_clique, &mut missing);
                stall = 0;
                continue;
            }
            // swap in a vertex missing exactly one clique member
            let swaps: Vec<usize> =
                (0..g.n).filter(|&v| !in_clique[v] && missing[v] == 1).collect();
            if swaps.is_empty() {
                break;
            }
            let v = *swaps.choose(&mut rng).unwrap();
            let out = clique
                .iter()
                .copied()
                .find(|&u| !g.adjacent(u, v))
                .expect("one missing member");
            remove_vertex(g, out, &mut clique, &mut in_clique, &mut missing);
            add_vertex(g, v, &mut clique, &mut in_clique, &mut missing);
            stall += 1;
        }
        if clique.len() > best.len() {
            best = clique;
        }
        iter += 1;
    }
    best
}

fn add_vertex(
    g: &BitGraph,
    v: usize,
    clique: &mut Vec<usize>,
    in_clique: &mut [bool],
    missing: &mut [u32],
) {
    for u in 0..g.n {
        if u != v && !g.adjacent(v, u) {
            missing[u] += 1;
        }
    }
    in_clique[v] = true;
    clique.push(v);
}

fn remove_vertex(
    g: &BitGraph,
    v: usize,
    clique: &mut Vec<usize>,
    in_clique: &mut [bool],
    missing: &mut [u32],
) {
    for u in 0..g.n {
        if u != v && !g.adjacent(v, u) {
            missing[u] -= 1;
        }
    }
    in_clique[v] = false;
    clique.retain(|&u| u != v);
}

/// Exact maximum code size (and a witness) for tiny instances, or the best
/// witness found within a budget.
pub fn brute_force_optimum(
    n: u32,
    d: u32,
    comp: &Composition,
    mode: OracleMode,
) -> Result<(u64, Code)> {
    if let OracleMode::Exact = mode {
        let limit = match comp.weights() {
            [1, 1, 1] => 6,
            [2, 1] => 7,
            [3] => 10,
            _ => 5,
        };
        if n > limit {
            return Err(Error::invalid(format!(
                "exact oracle limited to n <= {limit} for composition {comp} (got n={n})"
            )));
        }
    }
    let words = enumerate_words(n, comp);
    let g = build_graph(&words, d);
    let clique = match mode {
        OracleMode::Exact => exact_max_clique(&g),
        OracleMode::WitnessOnly { iterations, seed } => witness_clique(&g, iterations, seed),
    };
    let chosen: Vec<Codeword> = clique.iter().map(|&i| words[i].clone()).collect();
    let code = Code::new(n, comp.clone(), d, chosen);
    Ok((code.len() as u64, code))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::optimal_size;
    use crate::codes::verify_code;

    #[test]
    fn enumeration_counts() {
        let q111 = Composition::quaternary111();
        assert_eq!(enumerate_words(5, &q111).len(), 60); // C(5,3) * 3!
        let t21 = Composition::ternary21();
        assert_eq!(enumerate_words(5, &t21).len(), 30); // C(5,3) * 3
    }

    #[test]
    fn exact_small_quaternary() {
        let q111 = Composition::quaternary111();
        let (size, code) = brute_force_optimum(5, 4, &q111, OracleMode::Exact).unwrap();
        assert_eq!(size, 6);
        assert!(verify_code(&code).passed());
        let (size, _) = brute_force_optimum(4, 4, &q111, OracleMode::Exact).unwrap();
        assert_eq!(size, 4);
    }

    #[test]
    fn exact_forced_singleton_ternary() {
        let t21 = Composition::ternary21();
        let (size, _) = brute_force_optimum(3, 4, &t21, OracleMode::Exact).unwrap();
        assert_eq!(size, 1);
    }

    #[test]
    fn exact_beyond_bound_errors() {
        let q111 = Composition::quaternary111();
        assert!(brute_force_optimum(7, 4, &q111, OracleMode::Exact).is_err());
    }

    #[test]
    fn oracle_matches_table_on_small_cases() {
        // oracle equivalence on every tiny instance with a table value
        let t21 = Composition::ternary21();
        let q111 = Composition::quaternary111();
        for n in 3..=6u32 {
            for d in 3..=5u32 {
                let (size, _) = brute_force_optimum(n, d, &q111, OracleMode::Exact).unwrap();
                let table = optimal_size(4, n, d, &q111).unwrap();
                assert_eq!(
                    table.exact_value(),
                    Some(size),
                    "(4, n={n}, d={d}) oracle={size} table={:?}",
                    table
                );
            }
        }
        for n in 3..=7u32 {
            for d in 3..=5u32 {
                let (size, _) = brute_force_optimum(n, d, &t21, OracleMode::Exact).unwrap();
                let table = optimal_size(3, n, d, &t21).unwrap();
                assert_eq!(
                    table.exact_value(),
                    Some(size),
                    "(3, n={n}, d={d}) oracle={size} table={:?}",
                    table
                );
            }
        }
    }

    #[test]
    fn witness_reaches_known_sizes() {
        let q111 = Composition::quaternary111();
        let (size, code) = brute_force_optimum(
            7,
            4,
            &q111,
            OracleMode::WitnessOnly {
                iterations: 200_000,
                seed: 0,
            },
        )
        .unwrap();
        assert!(verify_code(&code).passed());
        assert!(size >= 16, "witness got {size} < 16");
    }
}
