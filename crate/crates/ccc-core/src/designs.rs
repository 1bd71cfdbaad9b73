//! Search-based and combinational manufacture of GDDs: hill-climbing
//! completion with fixed prestructures, parallel/holey-parallel class
//! extraction, the frame and RGDD completion operators, and the fundamental
//! construction for GDDs.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codes::{verify_design, BlockDesign, CoverageMode, GddType, GroupPartition};
use crate::gdc::SearchBudget;
use crate::{Error, Result};

/// The trivial {k}-GDD of type 1^k: one block on k singleton groups.
pub fn trivial_unit_gdd(k: u32) -> BlockDesign {
    let partition = GroupPartition::unit(k);
    BlockDesign::new(partition, vec![(0..k).collect()], [k].into_iter().collect())
}

/// Completion of a prestructure to a GDD by hill climbing on triples:
/// repeatedly pick an uncovered cross-group pair, choose a third point among
/// those displacing the fewest existing triples, evict what conflicts, and
/// insert. Deterministic for a given seed. Prestructure blocks are never
/// touched.
pub fn hill_climb_gdd(
    partition: &GroupPartition,
    k: &BTreeSet<u32>,
    prestructure: &[Vec<u32>],
    budget: &SearchBudget,
) -> Result<BlockDesign> {
    if !k.contains(&3) {
        return Err(Error::invalid("hill climbing searches triples; K must contain 3"));
    }
    let n = partition.n() as usize;

    // prestructure sanity: sizes in K, group meet <= 1, no double pairs
    {
        let pre = BlockDesign::new(partition.clone(), prestructure.to_vec(), k.clone());
        verify_design(&pre, CoverageMode::Partial).into_result("prestructure")?;
    }

    const FREE: u32 = u32::MAX;
    const FROZEN: u32 = u32::MAX - 1;
    let pair_id = |a: usize, b: usize| -> usize {
        if a < b {
            a * n + b
        } else {
            b * n + a
        }
    };

    // cover[pair] = FREE, FROZEN (prestructure), or the covering triple index
    let mut cover = vec![FREE; n * n];
    let mut uncovered: Vec<usize> = Vec::new();
    let mut uncovered_pos = vec![usize::MAX; n * n];
    let mut uncovered_degree = vec![0u32; n];

    for blk in prestructure {
        for i in 0..blk.len() {
            for j in i + 1..blk.len() {
                cover[pair_id(blk[i] as usize, blk[j] as usize)] = FROZEN;
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if partition.group_of(a as u32) != partition.group_of(b as u32)
                && cover[pair_id(a, b)] == FREE
            {
                uncovered_pos[pair_id(a, b)] = uncovered.len();
                uncovered.push(pair_id(a, b));
                uncovered_degree[a] += 1;
                uncovered_degree[b] += 1;
            }
        }
    }
    if uncovered.len() % 3 != 0 {
        return Err(Error::invalid(format!(
            "uncovered pair count {} is not divisible by 3",
            uncovered.len()
        )));
    }
    if uncovered_degree.iter().any(|&deg| deg % 2 != 0) {
        return Err(Error::invalid(
            "a point has odd uncovered degree; no triple completion exists",
        ));
    }

    let total_pairs = uncovered.len();
    let mut best_coverage = 0.0f64;

    for restart in 0..budget.max_restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(restart as u64));
        let mut cov = cover.clone();
        let mut unc = uncovered.clone();
        let mut unc_pos = uncovered_pos.clone();
        let mut triples: Vec<[u32; 3]> = Vec::new();
        let mut free_slots: Vec<usize> = Vec::new();

        let mut iterations = 0u64;
        while !unc.is_empty() && iterations < budget.max_iterations {
            iterations += 1;
            let pid = unc[rng.gen_range(0..unc.len())];
            let (x, y) = (pid / n, pid % n);
            let gx = partition.group_of(x as u32);
            let gy = partition.group_of(y as u32);
            let mut best_conflicts = 3u32;
            let mut choices: Vec<usize> = Vec::new();
            for z in 0..n {
                if z == x || z == y {
                    continue;
                }
                let gz = partition.group_of(z as u32);
                if gz == gx || gz == gy {
                    continue;
                }
                let c1 = cov[pair_id(x, z)];
                let c2 = cov[pair_id(y, z)];
                if c1 == FROZEN || c2 == FROZEN {
                    continue;
                }
                let conflicts = (c1 != FREE) as u32 + (c2 != FREE) as u32;
                if conflicts < best_conflicts {
                    best_conflicts = conflicts;
                    choices.clear();
                }
                if conflicts == best_conflicts {
                    choices.push(z);
                }
            }
            let Some(&z) = choices.as_slice().choose(&mut rng) else {
                continue;
            };
            // evict conflicting triples, returning their pairs to the pool
            for other in [pair_id(x, z), pair_id(y, z)] {
                let t = cov[other];
                if t != FREE && t != FROZEN {
                    let tri = triples[t as usize];
                    for i in 0..3 {
                        for j in i + 1..3 {
                            let pid2 = pair_id(tri[i] as usize, tri[j] as usize);
                            cov[pid2] = FREE;
                            unc_pos[pid2] = unc.len();
                            unc.push(pid2);
                        }
                    }
                    free_slots.push(t as usize);
                }
            }
            // insert {x, y, z}
            let slot = free_slots.pop().unwrap_or_else(|| {
                triples.push([0; 3]);
                triples.len() - 1
            });
            triples[slot] = [x as u32, y as u32, z as u32];
            for (a, b) in [(x, y), (x, z), (y, z)] {
                let pid2 = pair_id(a, b);
                cov[pid2] = slot as u32;
                let pos = unc_pos[pid2];
                debug_assert!(pos != usize::MAX);
                let last = *unc.last().unwrap();
                unc.swap_remove(pos);
                if pos < unc.len() {
                    unc_pos[last] = pos;
                }
                unc_pos[pid2] = usize::MAX;
            }
        }

        if unc.is_empty() {
            let mut blocks: Vec<Vec<u32>> = prestructure.to_vec();
            let mut seen = vec![false; triples.len()];
            for pid in 0..n * n {
                let t = cov[pid];
                if t != FREE && t != FROZEN && !seen[t as usize] {
                    seen[t as usize] = true;
                    let mut b = triples[t as usize].to_vec();
                    b.sort_unstable();
                    blocks.push(b);
                }
            }
            let design = BlockDesign::new(partition.clone(), blocks, k.clone());
            verify_design(&design, CoverageMode::Exact).into_result("hill_climb_gdd")?;
            return Ok(design);
        }
        let coverage = 1.0 - unc.len() as f64 / total_pairs.max(1) as f64;
        best_coverage = best_coverage.max(coverage);
    }
    Err(Error::BudgetExhausted {
        target: format!("{{3}}-completion of type {}", partition.gdd_type()),
        coverage: best_coverage,
    })
}

/// Hill-climb a GDD of the given type with contiguous groups and no
/// prestructure.
pub fn hill_climb_gdd_of_type(gdd_type: &GddType, budget: &SearchBudget) -> Result<BlockDesign> {
    let partition = gdd_type.contiguous_partition();
    hill_climb_gdd(&partition, &[3].into_iter().collect(), &[], budget)
}

/// Which kind of classes to extract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResolutionMode {
    Parallel,
    Holey,
}

/// Partition the blocks into parallel (or holey-parallel) classes by
/// backtracking, visiting at most `node_budget` search nodes. Returns the
/// classes without mutating the design.
pub fn extract_resolution(
    design: &BlockDesign,
    mode: ResolutionMode,
    node_budget: u64,
) -> Option<Vec<Vec<usize>>> {
    let n = design.n() as usize;
    let nblocks = design.blocks.len();
    if nblocks == 0 {
        return Some(Vec::new());
    }
    // fast path: a fixed class size must divide the block count
    if mode == ResolutionMode::Parallel {
        let sizes: BTreeSet<usize> = design.blocks.iter().map(|b| b.len()).collect();
        if sizes.len() == 1 {
            let bs = *sizes.iter().next().unwrap();
            if n % bs != 0 || nblocks % (n / bs) != 0 {
                return None;
            }
        }
    }

    let mut at_point: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (bi, b) in design.blocks.iter().enumerate() {
        for &p in b {
            at_point[p as usize].push(bi);
        }
    }

    struct Ctx<'a> {
        design: &'a BlockDesign,
        at_point: Vec<Vec<usize>>,
        n: usize,
        mode: ResolutionMode,
        nodes: u64,
        node_budget: u64,
    }

    fn complete_class(
        ctx: &mut Ctx<'_>,
        used: &mut Vec<bool>,
        covered: &mut Vec<bool>,
        hole: Option<u32>,
        class: &mut Vec<usize>,
        classes: &mut Vec<Vec<usize>>,
        remaining: usize,
    ) -> bool {
        if ctx.nodes >= ctx.node_budget {
            return false;
        }
        ctx.nodes += 1;
        let next = (0..ctx.n).find(|&p| {
            !covered[p] && hole.map_or(true, |h| ctx.design.partition.group_of(p as u32) != h)
        });
        let Some(p) = next else {
            classes.push(class.clone());
            if solve(ctx, used, classes, remaining) {
                return true;
            }
            classes.pop();
            return false;
        };
        let candidates: Vec<usize> = ctx.at_point[p]
            .iter()
            .copied()
            .filter(|&bi| !used[bi])
            .collect();
        for bi in candidates {
            let ok = {
                let block = &ctx.design.blocks[bi];
                !block.iter().any(|&q| covered[q as usize])
                    && hole.map_or(true, |h| {
                        !block.iter().any(|&q| ctx.design.partition.group_of(q) == h)
                    })
            };
            if !ok {
                continue;
            }
            used[bi] = true;
            for &q in &ctx.design.blocks[bi] {
                covered[q as usize] = true;
            }
            class.push(bi);
            if complete_class(ctx, used, covered, hole, class, classes, remaining - 1) {
                return true;
            }
            class.pop();
            for &q in &ctx.design.blocks[bi] {
                covered[q as usize] = false;
            }
            used[bi] = false;
        }
        false
    }

    fn solve(
        ctx: &mut Ctx<'_>,
        used: &mut Vec<bool>,
        classes: &mut Vec<Vec<usize>>,
        remaining: usize,
    ) -> bool {
        if remaining == 0 {
            return true;
        }
        if ctx.nodes >= ctx.node_budget {
            return false;
        }
        // canonical: the next class contains the lowest unused block
        let seed = (0..ctx.design.blocks.len()).find(|&bi| !used[bi]).unwrap();
        let holes: Vec<Option<u32>> = match ctx.mode {
            ResolutionMode::Parallel => vec![None],
            ResolutionMode::Holey => {
                let touched: BTreeSet<u32> = ctx.design.blocks[seed]
                    .iter()
                    .map(|&p| ctx.design.partition.group_of(p))
                    .collect();
                (0..ctx.design.partition.groups().len() as u32)
                    .filter(|g| !touched.contains(g))
                    .map(Some)
                    .collect()
            }
        };
        let block = ctx.design.blocks[seed].clone();
        for hole in holes {
            used[seed] = true;
            let mut covered = vec![false; ctx.n];
            for &q in &block {
                covered[q as usize] = true;
            }
            let mut class = vec![seed];
            if complete_class(ctx, used, &mut covered, hole, &mut class, classes, remaining - 1) {
                return true;
            }
            used[seed] = false;
        }
        false
    }

    let mut ctx = Ctx {
        design,
        at_point,
        n,
        mode,
        nodes: 0,
        node_budget,
    };
    let mut used = vec![false; nblocks];
    let mut classes = Vec::new();
    if solve(&mut ctx, &mut used, &mut classes, nblocks) {
        Some(classes)
    } else {
        None
    }
}

/// Resolvable TD: drop one group of a TD(k+1, m); the blocks through a fixed
/// point of the dropped group form a parallel class of the TD(k, m).
pub fn rtd_from_td(td: &BlockDesign, drop_group: usize) -> Result<BlockDesign> {
    let group = td
        .partition
        .groups()
        .get(drop_group)
        .ok_or_else(|| Error::invalid("no such group"))?
        .clone();
    let class_of: Vec<usize> = td
        .blocks
        .iter()
        .map(|b| {
            b.iter()
                .find_map(|p| group.iter().position(|q| q == p))
                .ok_or_else(|| Error::invalid("a block misses the dropped group"))
        })
        .collect::<Result<_>>()?;
    let remove: BTreeSet<u32> = group.iter().copied().collect();
    let mut out = crate::algebra::delete_points(td, &remove)?;
    let mut classes = vec![Vec::new(); group.len()];
    for (bi, &ci) in class_of.iter().enumerate() {
        classes[ci].push(bi);
    }
    out.resolution = Some(classes);
    verify_design(&out, CoverageMode::Exact).into_result("rtd_from_td")?;
    Ok(out)
}

/// The classes of a frame, labeled by the group each misses.
pub fn holey_classes_by_group(design: &BlockDesign) -> Result<Vec<(u32, Vec<usize>)>> {
    let classes = design
        .resolution
        .as_ref()
        .ok_or_else(|| Error::invalid("design carries no resolution"))?;
    let mut out = Vec::new();
    for class in classes {
        let mut covered = vec![false; design.n() as usize];
        for &bi in class {
            for &p in &design.blocks[bi] {
                covered[p as usize] = true;
            }
        }
        let missing: Vec<u32> = (0..design.n()).filter(|&p| !covered[p as usize]).collect();
        let group = design
            .partition
            .groups()
            .iter()
            .position(|g| g.as_slice() == missing.as_slice())
            .ok_or_else(|| Error::invalid("class misses a non-group point set"))?;
        out.push((group as u32, class.clone()));
    }
    Ok(out)
}

/// Add y points to a frame: the new points join a picked group G, and each
/// of y holey classes missing G absorbs one new point into all its blocks.
/// The result is a plain GDD of type g^(t-1) (g+y)^1.
pub fn add_points_to_frame(frame: &BlockDesign, y: u32) -> Result<BlockDesign> {
    if y == 0 {
        let mut out = frame.clone();
        out.resolution = None;
        verify_design(&out, CoverageMode::Exact).into_result("add_points_to_frame")?;
        return Ok(out);
    }
    let labeled = holey_classes_by_group(frame)?;
    let group_count = frame.partition.groups().len();
    let picked = (0..group_count as u32)
        .find(|g| labeled.iter().filter(|(h, _)| h == g).count() >= y as usize)
        .ok_or_else(|| {
            Error::invalid(format!("no group has {y} holey classes to absorb the new points"))
        })?;
    let n = frame.n();
    let total = n + y;
    let chosen: Vec<&Vec<usize>> = labeled
        .iter()
        .filter(|(h, _)| *h == picked)
        .take(y as usize)
        .map(|(_, c)| c)
        .collect();
    let mut blocks = frame.blocks.clone();
    for (i, class) in chosen.iter().enumerate() {
        for &bi in class.iter() {
            blocks[bi].push(n + i as u32);
        }
    }
    let mut groups = frame.partition.groups().to_vec();
    groups[picked as usize].extend(n..total);
    let partition = GroupPartition::new(total, groups)?;
    let k: BTreeSet<u32> = blocks.iter().map(|b| b.len() as u32).collect();
    let design = BlockDesign::new(partition, blocks, k);
    verify_design(&design, CoverageMode::Exact).into_result("add_points_to_frame")?;
    Ok(design)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RgddCompletion {
    /// Complete u parallel classes with one new point each: type g^t u^1.
    Append { u: u32 },
    /// Consume the final class as new groups, turn the old groups into
    /// blocks: from a {3}-RGDD of type 2^(3k), a {3,4}-GDD of type
    /// 3^(2k) (3k-1)^1.
    GroupClass,
}

/// Complete parallel classes of a resolvable GDD into new group structure.
pub fn complete_rgdd(rgdd: &BlockDesign, completion: RgddCompletion) -> Result<BlockDesign> {
    let classes = rgdd
        .resolution
        .as_ref()
        .ok_or_else(|| Error::invalid("input carries no parallel classes"))?
        .clone();
    let n = rgdd.n();
    match completion {
        RgddCompletion::Append { u } => {
            if u as usize > classes.len() {
                return Err(Error::invalid(format!(
                    "cannot complete {u} classes, only {} available",
                    classes.len()
                )));
            }
            let total = n + u;
            let mut blocks = rgdd.blocks.clone();
            for (i, class) in classes.iter().take(u as usize).enumerate() {
                for &bi in class {
                    blocks[bi].push(n + i as u32);
                }
            }
            let mut groups = rgdd.partition.groups().to_vec();
            if u > 0 {
                groups.push((n..total).collect());
            }
            let partition = GroupPartition::new(total, groups)?;
            let k: BTreeSet<u32> = blocks.iter().map(|b| b.len() as u32).collect();
            let design = BlockDesign::new(partition, blocks, k);
            verify_design(&design, CoverageMode::Exact).into_result("complete_rgdd append")?;
            Ok(design)
        }
        RgddCompletion::GroupClass => {
            let old_type = rgdd.gdd_type();
            if old_type.entries().len() != 1 || old_type.entries()[0].0 != 2 {
                return Err(Error::invalid("group-class completion expects type 2^(3k)"));
            }
            let infinity = classes.len() as u32;
            let total = n + infinity;
            let last = classes.len() - 1;
            let mut blocks: Vec<Vec<u32>> = Vec::new();
            for (i, class) in classes.iter().enumerate().take(last) {
                for &bi in class {
                    let mut b = rgdd.blocks[bi].clone();
                    b.push(n + i as u32);
                    blocks.push(b);
                }
            }
            for g in rgdd.partition.groups() {
                let mut b = g.clone();
                b.push(n + last as u32);
                blocks.push(b);
            }
            let mut groups: Vec<Vec<u32>> =
                classes[last].iter().map(|&bi| rgdd.blocks[bi].clone()).collect();
            groups.push((n..total).collect());
            let partition = GroupPartition::new(total, groups)?;
            let k: BTreeSet<u32> = blocks.iter().map(|b| b.len() as u32).collect();
            let design = BlockDesign::new(partition, blocks, k);
            verify_design(&design, CoverageMode::Exact).into_result("complete_rgdd group-class")?;
            Ok(design)
        }
    }
}

/// Ingredient lookup by type for the fundamental construction on designs.
pub type GddResolver<'a> = dyn FnMut(&GddType) -> Result<BlockDesign> + 'a;

/// The fundamental construction for GDDs: inflate each point x to omega(x)
/// copies, replacing each block by an ingredient GDD of the induced type.
pub fn wfc_gdd(
    master: &BlockDesign,
    weights: &[u32],
    resolve: &mut GddResolver<'_>,
) -> Result<BlockDesign> {
    let n = master.n();
    if weights.len() != n as usize {
        return Err(Error::invalid("one weight per master point required"));
    }
    let offsets: Vec<u32> = weights
        .iter()
        .scan(0u32, |acc, &w| {
            let out = *acc;
            *acc += w;
            Some(out)
        })
        .collect();
    let total: u32 = weights.iter().sum();

    let mut groups: Vec<Vec<u32>> = Vec::new();
    for g in master.partition.groups() {
        let mut out_group = Vec::new();
        for &x in g {
            for j in 0..weights[x as usize] {
                out_group.push(offsets[x as usize] + j);
            }
        }
        if !out_group.is_empty() {
            groups.push(out_group);
        }
    }
    let partition = GroupPartition::new(total, groups)?;

    let mut blocks: Vec<Vec<u32>> = Vec::new();
    for block in &master.blocks {
        let weighted: Vec<u32> = block
            .iter()
            .copied()
            .filter(|&x| weights[x as usize] > 0)
            .collect();
        if weighted.len() < 2 {
            continue;
        }
        let ing_type = GddType::from_sizes(weighted.iter().map(|&x| weights[x as usize]));
        let ingredient = resolve(&ing_type)?;
        if ingredient.gdd_type() != ing_type {
            return Err(Error::verification(
                "wfc_gdd",
                format!("ingredient has type {} need {}", ingredient.gdd_type(), ing_type),
            ));
        }
        let mut block_by_weight: Vec<u32> = weighted.clone();
        block_by_weight.sort_unstable_by_key(|&x| (std::cmp::Reverse(weights[x as usize]), x));
        let mut ing_groups: Vec<&Vec<u32>> = ingredient.partition.groups().iter().collect();
        ing_groups.sort_by_key(|g| std::cmp::Reverse(g.len()));
        let mut map = vec![0u32; ingredient.partition.n() as usize];
        for (x, g) in block_by_weight.iter().zip(ing_groups.iter()) {
            debug_assert_eq!(g.len() as u32, weights[*x as usize]);
            for (j, &ing_pt) in g.iter().enumerate() {
                map[ing_pt as usize] = offsets[*x as usize] + j as u32;
            }
        }
        for b in &ingredient.blocks {
            let mut nb: Vec<u32> = b.iter().map(|&p| map[p as usize]).collect();
            nb.sort_unstable();
            blocks.push(nb);
        }
    }
    let k: BTreeSet<u32> = blocks.iter().map(|b| b.len() as u32).collect();
    let design = BlockDesign::new(partition, blocks, k);
    verify_design(&design, CoverageMode::Exact).into_result("wfc_gdd")?;
    Ok(design)
}

/// A {3,4}-GDD of type 6^4 7^1 built in-process: six disjoint transversal
/// quads give every point of the four 6-groups the odd quad-degree the
/// parity conditions demand, and hill climbing supplies the 116 triples.
pub fn gdd_6_6_6_6_7(budget: &SearchBudget) -> Result<BlockDesign> {
    let gdd_type: GddType = "6^4 7^1".parse().unwrap();
    // contiguous layout is size-descending: the 7-group sits at 0..7
    let partition = gdd_type.contiguous_partition();
    let quads: Vec<Vec<u32>> = (0..6u32)
        .map(|i| vec![7 + i, 13 + i, 19 + i, 25 + i])
        .collect();
    hill_climb_gdd(&partition, &[3, 4].into_iter().collect(), &quads, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::td_from_field;
    use crate::bounds::binom;

    fn budget() -> SearchBudget {
        SearchBudget {
            max_iterations: 2_000_000,
            max_restarts: 10,
            seed: 0,
        }
    }

    #[test]
    fn hill_climb_completes_6_5() {
        let gdd_type: GddType = "6^5".parse().unwrap();
        let design = hill_climb_gdd_of_type(&gdd_type, &budget()).unwrap();
        // (C(30,2) - 5*C(6,2)) / 3 = 120 triples
        assert_eq!(design.blocks.len(), 120);
    }

    #[test]
    fn hill_climb_small_type_2_3() {
        let gdd_type: GddType = "2^3".parse().unwrap();
        let design = hill_climb_gdd_of_type(&gdd_type, &budget()).unwrap();
        assert_eq!(design.blocks.len(), 4);
    }

    #[test]
    fn hill_climb_rejects_odd_parity() {
        // type 6^4 7^1 without a prestructure: every 6-group point has odd
        // uncovered degree
        let gdd_type: GddType = "6^4 7^1".parse().unwrap();
        let err = hill_climb_gdd_of_type(&gdd_type, &budget()).unwrap_err();
        assert!(err.to_string().contains("odd"), "{err}");
    }

    #[test]
    fn prestructured_6_4_7_completes() {
        let design = gdd_6_6_6_6_7(&budget()).unwrap();
        let census = design.block_size_census();
        assert_eq!(census.get(&4), Some(&6));
        let pairs = binom(31, 2) - 4 * binom(6, 2) - binom(7, 2);
        assert_eq!(census.get(&3).copied().unwrap(), (pairs as u32 - 36) / 3);
    }

    #[test]
    fn rtd_from_td_and_completion() {
        let td = td_from_field(4, 3).unwrap();
        let rtd = rtd_from_td(&td, 3).unwrap();
        assert_eq!(rtd.gdd_type().to_string(), "3^3");
        assert_eq!(rtd.resolution.as_ref().unwrap().len(), 3);
        // re-extract the resolution by search: same class count
        let mut stripped = rtd.clone();
        stripped.resolution = None;
        let classes = extract_resolution(&stripped, ResolutionMode::Parallel, 100_000).unwrap();
        assert_eq!(classes.len(), 3);

        let td = td_from_field(4, 9).unwrap();
        let rtd = rtd_from_td(&td, 3).unwrap();
        assert_eq!(rtd.resolution.as_ref().unwrap().len(), 9);
        let done = complete_rgdd(&rtd, RgddCompletion::Append { u: 4 }).unwrap();
        assert_eq!(done.gdd_type().to_string(), "9^3 4^1");
        let same = complete_rgdd(&rtd, RgddCompletion::Append { u: 0 }).unwrap();
        assert_eq!(same.blocks.len(), rtd.blocks.len());
    }

    #[test]
    fn resolution_fast_path_rejects() {
        let td = td_from_field(3, 3).unwrap();
        let mut broken = td.clone();
        broken.blocks.pop();
        assert!(extract_resolution(&broken, ResolutionMode::Parallel, 100_000).is_none());
    }

    #[test]
    fn wfc_gdd_uniform_weight() {
        // inflate a TD(3,3) by 2 with {3}-GDD ingredients of type 2^3
        let master = td_from_field(3, 3).unwrap();
        let weights = vec![2u32; 9];
        let mut resolver = |t: &GddType| -> Result<BlockDesign> {
            assert_eq!(t.to_string(), "2^3");
            let gdd_type: GddType = "2^3".parse().unwrap();
            hill_climb_gdd_of_type(&gdd_type, &budget())
        };
        let out = wfc_gdd(&master, &weights, &mut resolver).unwrap();
        assert_eq!(out.gdd_type().to_string(), "6^3");
    }

    #[test]
    fn wfc_gdd_weight_one_is_copy() {
        let master = td_from_field(3, 3).unwrap();
        let weights = vec![1u32; 9];
        let mut resolver = |t: &GddType| -> Result<BlockDesign> {
            assert_eq!(t.to_string(), "1^3");
            Ok(trivial_unit_gdd(3))
        };
        let out = wfc_gdd(&master, &weights, &mut resolver).unwrap();
        assert_eq!(out.blocks.len(), master.blocks.len());
        assert_eq!(out.gdd_type(), master.gdd_type());
    }
}
