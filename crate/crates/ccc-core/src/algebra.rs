//! Finite fields, Latin squares, transversal designs from fields, and the
//! truncation operators that manufacture ingredient GDDs.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codes::{verify_design, BlockDesign, CoverageMode, GroupPartition};
use crate::{Error, Result};

/// GF(p^k) with elements indexed 0..q-1. The index encodes polynomial
/// coefficients in base p, so 0 and 1 are the additive and multiplicative
/// identities in every field.
#[derive(Clone, Debug)]
pub struct FiniteField {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    /// Monic irreducible modulus, coefficient of x^i at index i (k > 1).
    pub modulus: Vec<u32>,
    add_table: Vec<u32>,
    mul_table: Vec<u32>,
    generator: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n as u64 {
        if n as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `q = p^k` for a prime p, if it is a prime power.
pub fn prime_power_decompose(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u32;
    while (p as u64 * p as u64) <= q as u64 {
        if q % p == 0 {
            let mut rest = q;
            let mut k = 0;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            return if rest == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] += ai as u64 * bj as u64;
        }
    }
    // reduce mod modulus (monic)
    for i in (k..prod.len()).rev() {
        let c = prod[i] % p as u64;
        if c != 0 {
            for j in 0..k {
                let sub = c * modulus[j] as u64 % p as u64;
                prod[i - k + j] = (prod[i - k + j] + (p as u64 - sub)) % p as u64
                    + p as u64 * 0;
            }
        }
        prod[i] = 0;
    }
    prod.truncate(k.max(1));
    prod.iter().map(|&c| (c % p as u64) as u32).collect()
}

fn index_to_poly(mut idx: u32, p: u32, k: u32) -> Vec<u32> {
    let mut c = vec![0u32; k as usize];
    for coeff in c.iter_mut() {
        *coeff = idx % p;
        idx /= p;
    }
    c
}

fn poly_to_index(c: &[u32], p: u32) -> u32 {
    let mut idx = 0u32;
    for &coeff in c.iter().rev() {
        idx = idx * p + coeff;
    }
    idx
}

fn is_irreducible(candidate: &[u32], p: u32) -> bool {
    // trial division by all monic polynomials of degree 1..=deg/2
    let deg = candidate.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut divisor = index_to_poly(idx as u32, p, d as u32);
            divisor.push(1); // monic
            if poly_divides(&divisor, candidate, p) {
                return false;
            }
        }
    }
    true
}

fn poly_divides(divisor: &[u32], dividend: &[u32], p: u32) -> bool {
    let mut rem: Vec<u32> = dividend.to_vec();
    let dd = divisor.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap() % p;
        if lead != 0 {
            let shift = rem.len() - 1 - dd;
            for i in 0..=dd {
                let sub = lead as u64 * divisor[i] as u64 % p as u64;
                let pos = shift + i;
                rem[pos] = ((rem[pos] as u64 + p as u64 * p as u64 - sub) % p as u64) as u32;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c % p == 0)
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut fs = Vec::new();
    let mut d = 2;
    while d as u64 * d as u64 <= n as u64 {
        if n % d == 0 {
            fs.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        fs.push(n);
    }
    fs
}

impl FiniteField {
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add_table[(a * self.q + b) as usize]
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            (self.q - a) % self.q
        } else {
            let c = index_to_poly(a, self.p, self.k)
                .iter()
                .map(|&x| (self.p - x) % self.p)
                .collect::<Vec<_>>();
            poly_to_index(&c, self.p)
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul_table[(a * self.q + b) as usize]
    }

    pub fn pow(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::invalid("inverse of zero"));
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    /// A fixed multiplicative generator (the smallest in index order).
    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn element_order(&self, a: u32) -> Result<u64> {
        if a == 0 {
            return Err(Error::invalid("zero has no multiplicative order"));
        }
        let mut ord = 1u64;
        let mut x = a;
        while x != 1 {
            x = self.mul(x, a);
            ord += 1;
            if ord > self.q as u64 {
                return Err(Error::invalid("order computation ran away"));
            }
        }
        Ok(ord)
    }

    pub fn is_generator(&self, a: u32) -> bool {
        if a == 0 {
            return false;
        }
        let order = self.q as u64 - 1;
        prime_factors(self.q - 1)
            .iter()
            .all(|&r| self.pow(a, order / r as u64) != 1)
    }

    /// The (q-1)/2 nonzero squares.
    pub fn quadratic_residues(&self) -> Result<BTreeSet<u32>> {
        if self.p == 2 {
            return Err(Error::invalid(
                "quadratic residues need odd characteristic",
            ));
        }
        Ok((1..self.q).map(|x| self.mul(x, x)).collect())
    }

    fn spot_check_axioms(&self) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(0xf1e1d);
        for _ in 0..200 {
            let a = rng.gen_range(0..self.q);
            let b = rng.gen_range(0..self.q);
            let c = rng.gen_range(0..self.q);
            if self.add(a, b) != self.add(b, a)
                || self.mul(a, b) != self.mul(b, a)
                || self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                || self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
            {
                return Err(Error::verification(
                    "field axioms",
                    format!("failed on triple ({a},{b},{c})"),
                ));
            }
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return Err(Error::verification("field identities", format!("element {a}")));
            }
            if a != 0 && self.mul(a, self.inv(a)?) != 1 {
                return Err(Error::verification("field inverses", format!("element {a}")));
            }
        }
        Ok(())
    }
}

/// Build GF(q) for a prime power q. Extension fields use the
/// lexicographically smallest monic irreducible modulus, so the tables are
/// reproducible.
pub fn make_field(q: u32) -> Result<FiniteField> {
    let (p, k) = prime_power_decompose(q).ok_or(Error::NotPrimePower(q as u64))?;
    if !is_prime(p) {
        return Err(Error::NotPrimePower(q as u64));
    }
    if q > 1 << 12 {
        return Err(Error::invalid(format!("field order {q} too large for table-based field")));
    }

    let modulus: Vec<u32> = if k == 1 {
        vec![0, 1]
    } else {
        // smallest monic irreducible of degree k: iterate constant-first index
        let mut found = None;
        let count = (p as u64).pow(k);
        for idx in 0..count {
            let mut cand = index_to_poly(idx as u32, p, k);
            cand.push(1);
            if cand[0] != 0 && is_irreducible(&cand, p) {
                found = Some(cand);
                break;
            }
        }
        found.ok_or_else(|| Error::invalid(format!("no irreducible polynomial for GF({q})")))?
    };

    let mut add_table = vec![0u32; (q * q) as usize];
    let mut mul_table = vec![0u32; (q * q) as usize];
    for a in 0..q {
        for b in 0..q {
            if k == 1 {
                add_table[(a * q + b) as usize] = (a + b) % p;
                mul_table[(a * q + b) as usize] = ((a as u64 * b as u64) % p as u64) as u32;
            } else {
                let pa = index_to_poly(a, p, k);
                let pb = index_to_poly(b, p, k);
                let sum: Vec<u32> = pa.iter().zip(&pb).map(|(&x, &y)| (x + y) % p).collect();
                add_table[(a * q + b) as usize] = poly_to_index(&sum, p);
                let prod = poly_mul_mod(&pa, &pb, &modulus, p);
                mul_table[(a * q + b) as usize] = poly_to_index(&prod, p);
            }
        }
    }

    let mut field = FiniteField {
        p,
        k,
        q,
        modulus,
        add_table,
        mul_table,
        generator: 0,
    };
    let generator = (1..q)
        .find(|&g| field.is_generator(g))
        .ok_or_else(|| Error::invalid(format!("no generator found for GF({q})")))?;
    field.generator = generator;
    field.spot_check_axioms()?;
    if field.element_order(generator)? != q as u64 - 1 {
        return Err(Error::verification("generator order", format!("{generator}")));
    }
    Ok(field)
}

/// An m x m array with each symbol once per row and column.
#[derive(Clone, Debug)]
pub struct LatinSquare {
    pub m: u32,
    pub cells: Vec<u32>, // row-major
}

impl LatinSquare {
    /// The cyclic square: cell (r, c) = r + c (mod m).
    pub fn cyclic(m: u32) -> Self {
        let mut cells = Vec::with_capacity((m * m) as usize);
        for r in 0..m {
            for c in 0..m {
                cells.push((r + c) % m);
            }
        }
        LatinSquare { m, cells }
    }

    pub fn cell(&self, r: u32, c: u32) -> u32 {
        self.cells[(r * self.m + c) as usize]
    }

    pub fn verify(&self) -> Result<()> {
        let m = self.m;
        for r in 0..m {
            let mut row = vec![false; m as usize];
            let mut col = vec![false; m as usize];
            for c in 0..m {
                let v = self.cell(r, c);
                let w = self.cell(c, r);
                if v >= m || row[v as usize] || w >= m || col[w as usize] {
                    return Err(Error::verification(
                        "latin square",
                        format!("row/column {r} repeats a symbol"),
                    ));
                }
                row[v as usize] = true;
                col[w as usize] = true;
            }
        }
        Ok(())
    }

    /// The equivalent TD(3, m): groups rows, columns, symbols.
    pub fn to_td(&self) -> Result<BlockDesign> {
        let m = self.m;
        self.verify()?;
        let partition = GroupPartition::new(
            3 * m,
            vec![
                (0..m).collect(),
                (m..2 * m).collect(),
                (2 * m..3 * m).collect(),
            ],
        )?;
        let mut blocks = Vec::new();
        for r in 0..m {
            for c in 0..m {
                blocks.push(vec![r, m + c, 2 * m + self.cell(r, c)]);
            }
        }
        let design = BlockDesign::new(partition, blocks, [3].into_iter().collect());
        verify_design(&design, CoverageMode::Exact).into_result("TD(3,m) from latin square")?;
        Ok(design)
    }
}

/// TD(k, q) for prime powers q, with k <= q + 1. Blocks are the graphs of the
/// affine maps a + b*x over the first k elements in index order; for
/// k = q + 1 the slope index joins as an extra group.
pub fn td_from_field(k: u32, q: u32) -> Result<BlockDesign> {
    if k < 2 {
        return Err(Error::invalid("transversal designs need k >= 2"));
    }
    let field = make_field(q)?;
    if k > q + 1 {
        return Err(Error::invalid(format!("TD({k},{q}) exceeds k = q+1")));
    }
    let base_groups = k.min(q);
    let slope_group = k == q + 1;
    let n = k * q;
    let mut groups: Vec<Vec<u32>> = (0..k).map(|i| (i * q..(i + 1) * q).collect()).collect();
    groups.truncate(k as usize);
    let partition = GroupPartition::new(n, groups)?;
    let mut blocks = Vec::with_capacity((q * q) as usize);
    for a in 0..q {
        for b in 0..q {
            let mut block = Vec::with_capacity(k as usize);
            for i in 0..base_groups {
                let x = i; // the i-th element in index order
                let y = field.add(a, field.mul(b, x));
                block.push(i * q + y);
            }
            if slope_group {
                block.push(q * q + b);
            }
            blocks.push(block);
        }
    }
    let design = BlockDesign::new(partition, blocks, [k].into_iter().collect());
    verify_design(&design, CoverageMode::Exact).into_result("TD from field")?;
    Ok(design)
}

/// MacNeish product: TD(k, m) x TD(k, n) -> TD(k, m*n).
pub fn td_product(t1: &BlockDesign, t2: &BlockDesign) -> Result<BlockDesign> {
    let k = t1.partition.groups().len();
    if k != t2.partition.groups().len() {
        return Err(Error::invalid("TD product needs equal block size"));
    }
    let m = t1.partition.groups()[0].len() as u32;
    let n = t2.partition.groups()[0].len() as u32;
    if t1.partition.groups().iter().any(|g| g.len() as u32 != m)
        || t2.partition.groups().iter().any(|g| g.len() as u32 != n)
    {
        return Err(Error::invalid("TD product needs uniform group sizes"));
    }
    // local index of a point inside its group
    let local = |td: &BlockDesign, p: u32| -> (u32, u32) {
        let g = td.partition.group_of(p);
        let idx = td.partition.groups()[g as usize]
            .iter()
            .position(|&x| x == p)
            .unwrap() as u32;
        (g, idx)
    };
    let nn = k as u32 * m * n;
    let groups: Vec<Vec<u32>> = (0..k as u32)
        .map(|i| (i * m * n..(i + 1) * m * n).collect())
        .collect();
    let partition = GroupPartition::new(nn, groups)?;
    let mut blocks = Vec::new();
    for b1 in &t1.blocks {
        for b2 in &t2.blocks {
            let mut block = vec![0u32; k];
            for &p in b1 {
                let (g, x) = local(t1, p);
                let q2 = b2
                    .iter()
                    .find(|&&q| t2.partition.group_of(q) == g)
                    .copied()
                    .ok_or_else(|| Error::invalid("block misses a group in TD product"))?;
                let (_, y) = local(t2, q2);
                block[g as usize] = g * m * n + x * n + y;
            }
            blocks.push(block);
        }
    }
    let design = BlockDesign::new(partition, blocks, t1.k.clone());
    verify_design(&design, CoverageMode::Exact).into_result("TD product")?;
    Ok(design)
}

/// Remove a point set from a design: points leave groups and blocks, empty
/// groups and blocks of fewer than two points are dropped, and the point
/// space is compacted to stay contiguous.
pub fn delete_points(design: &BlockDesign, remove: &BTreeSet<u32>) -> Result<BlockDesign> {
    let n = design.n();
    let mut map = vec![u32::MAX; n as usize];
    let mut next = 0u32;
    for p in 0..n {
        if !remove.contains(&p) {
            map[p as usize] = next;
            next += 1;
        }
    }
    let groups: Vec<Vec<u32>> = design
        .partition
        .groups()
        .iter()
        .map(|g| {
            g.iter()
                .filter(|p| !remove.contains(p))
                .map(|&p| map[p as usize])
                .collect::<Vec<u32>>()
        })
        .filter(|g: &Vec<u32>| !g.is_empty())
        .collect();
    let partition = GroupPartition::new(next, groups)?;
    let blocks: Vec<Vec<u32>> = design
        .blocks
        .iter()
        .map(|b| {
            b.iter()
                .filter(|p| !remove.contains(p))
                .map(|&p| map[p as usize])
                .collect::<Vec<u32>>()
        })
        .filter(|b: &Vec<u32>| b.len() >= 2)
        .collect();
    let k: BTreeSet<u32> = blocks.iter().map(|b| b.len() as u32).collect();
    Ok(BlockDesign::new(partition, blocks, k))
}

/// Truncate the last `s` groups of a TD(k+s, m) to the given sizes, keeping
/// `keep` groups whole: a {keep..keep+s}-GDD of type m^keep g1 ... gs.
pub fn truncate_groups(td: &BlockDesign, keep: u32, sizes: &[u32]) -> Result<BlockDesign> {
    let total_groups = td.partition.groups().len() as u32;
    if keep + sizes.len() as u32 != total_groups {
        return Err(Error::invalid(format!(
            "truncate_groups: {keep} kept + {} truncated != {total_groups} groups",
            sizes.len()
        )));
    }
    let mut remove = BTreeSet::new();
    for (i, &target) in sizes.iter().enumerate() {
        let g = &td.partition.groups()[(keep as usize) + i];
        if target as usize > g.len() {
            return Err(Error::invalid(format!(
                "cannot truncate group of {} points to {target}",
                g.len()
            )));
        }
        for &p in g.iter().skip(target as usize) {
            remove.insert(p);
        }
    }
    let out = delete_points(td, &remove)?;
    verify_design(&out, CoverageMode::Exact).into_result("truncate_groups")?;
    Ok(out)
}

/// Delete `s` points lying in one block of a TD(k, m): a
/// {k-s, k-1, k}-GDD of type (m-1)^s m^(k-s). Degenerate blocks of fewer
/// than two points are dropped.
pub fn truncate_block(td: &BlockDesign, s: u32) -> Result<BlockDesign> {
    let k = td.partition.groups().len() as u32;
    if s > k {
        return Err(Error::invalid(format!("cannot delete {s} points from blocks of size {k}")));
    }
    if td.blocks.is_empty() {
        return Err(Error::invalid("empty design"));
    }
    let block = td.blocks[0].clone();
    let remove: BTreeSet<u32> = block.iter().take(s as usize).copied().collect();
    let out = delete_points(td, &remove)?;
    verify_design(&out, CoverageMode::Exact).into_result("truncate_block")?;
    Ok(out)
}

/// Remove a whole block and three of its points from a TD(4, m): a
/// {3,4}-GDD of type (m-1)^3 m^1.
pub fn remove_block_and_points(td: &BlockDesign, block_idx: usize, drop: &[u32]) -> Result<BlockDesign> {
    let block = td
        .blocks
        .get(block_idx)
        .ok_or_else(|| Error::invalid("block index out of range"))?;
    if drop.len() != 3 || !drop.iter().all(|p| block.contains(p)) {
        return Err(Error::invalid("must drop exactly 3 points of the chosen block"));
    }
    let mut trimmed = design_without_block(td, block_idx);
    let remove: BTreeSet<u32> = drop.iter().copied().collect();
    trimmed = delete_points(&trimmed, &remove)?;
    verify_design(&trimmed, CoverageMode::Exact).into_result("remove_block_and_points")?;
    Ok(trimmed)
}

fn design_without_block(design: &BlockDesign, block_idx: usize) -> BlockDesign {
    let mut blocks = design.blocks.clone();
    blocks.remove(block_idx);
    BlockDesign::new(design.partition.clone(), blocks, design.k.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_and_generator() {
        let f = make_field(47).unwrap();
        assert_eq!(f.generator(), 5);
        assert_eq!(f.element_order(5).unwrap(), 46);
        // alpha = 5 satisfies the square condition: 4 is a residue
        let qr = f.quadratic_residues().unwrap();
        assert!(qr.contains(&4));
        assert_eq!(qr.len(), 23);
    }

    #[test]
    fn extension_field_gf16() {
        let f = make_field(16).unwrap();
        assert_eq!((f.p, f.k), (2, 4));
        assert_eq!(f.element_order(f.generator()).unwrap(), 15);
        // addition is xor in GF(2^k) with this encoding
        assert_eq!(f.add(0b1010, 0b0110), 0b1100);
    }

    #[test]
    fn extension_field_gf27() {
        let f = make_field(27).unwrap();
        assert_eq!((f.p, f.k), (3, 3));
        assert!(f.is_generator(f.generator()));
        let qr = f.quadratic_residues().unwrap();
        assert_eq!(qr.len(), 13);
    }

    #[test]
    fn non_prime_power_rejected() {
        assert!(make_field(6).is_err());
        assert!(make_field(1).is_err());
    }

    #[test]
    fn quadratic_residues_small_primes() {
        let f = make_field(11).unwrap();
        let qr: Vec<u32> = f.quadratic_residues().unwrap().into_iter().collect();
        assert_eq!(qr, vec![1, 3, 4, 5, 9]);
        let f = make_field(7).unwrap();
        let qr: Vec<u32> = f.quadratic_residues().unwrap().into_iter().collect();
        assert_eq!(qr, vec![1, 2, 4]);
        let f = make_field(16).unwrap();
        assert!(f.quadratic_residues().is_err());
    }

    #[test]
    fn td_constructions() {
        let td = td_from_field(4, 8).unwrap();
        assert_eq!(td.blocks.len(), 64);
        let td = td_from_field(5, 5).unwrap();
        assert_eq!(td.blocks.len(), 25);
        let td = td_from_field(3, 2).unwrap();
        assert_eq!(td.blocks.len(), 4);
        // k = q+1 via the slope group
        let td = td_from_field(6, 5).unwrap();
        assert_eq!(td.blocks.len(), 25);
        assert!(verify_design(&td, CoverageMode::Exact).passed());
        assert!(td_from_field(8, 5).is_err());
    }

    #[test]
    fn td_product_reaches_composite_orders() {
        let a = td_from_field(3, 2).unwrap();
        let b = td_from_field(3, 3).unwrap();
        let prod = td_product(&a, &b).unwrap();
        assert_eq!(prod.gdd_type().to_string(), "6^3");
        let a = td_from_field(4, 3).unwrap();
        let b = td_from_field(4, 5).unwrap();
        let prod = td_product(&a, &b).unwrap();
        assert_eq!(prod.gdd_type().to_string(), "15^4");
    }

    #[test]
    fn truncate_groups_census() {
        // keep 4 groups of TD(5,5), truncate the last to 2 points
        let td = td_from_field(5, 5).unwrap();
        let g = truncate_groups(&td, 4, &[2]).unwrap();
        assert_eq!(g.gdd_type().to_string(), "5^4 2^1");
        let census = g.block_size_census();
        assert_eq!(census.get(&4), Some(&15));
        assert_eq!(census.get(&5), Some(&10));
        // truncate to 3 points
        let g = truncate_groups(&td, 4, &[3]).unwrap();
        let census = g.block_size_census();
        assert_eq!(census.get(&4), Some(&10));
        assert_eq!(census.get(&5), Some(&15));
        // truncating to zero drops the group entirely
        let g = truncate_groups(&td, 4, &[0]).unwrap();
        assert_eq!(g.gdd_type().to_string(), "5^4");
    }

    #[test]
    fn truncate_block_census() {
        let td = td_from_field(4, 3).unwrap();
        let g = truncate_block(&td, 3).unwrap();
        assert_eq!(g.gdd_type().to_string(), "3^1 2^3");
        assert!(g.k.contains(&3) && g.k.contains(&4));
        // s = 0 leaves the TD unchanged
        let same = truncate_block(&td, 0).unwrap();
        assert_eq!(same.blocks.len(), td.blocks.len());
        // TD(4,5) minus 2 collinear points: census fixed by the verifier
        let td = td_from_field(4, 5).unwrap();
        let g = truncate_block(&td, 2).unwrap();
        assert_eq!(g.gdd_type().to_string(), "5^2 4^2");
        let census = g.block_size_census();
        // one block lost both points, 8 lost one, 16 untouched
        assert_eq!(census.get(&2), Some(&1));
        assert_eq!(census.get(&3), Some(&8));
        assert_eq!(census.get(&4), Some(&16));
    }

    #[test]
    fn remove_block_and_points_gives_7_7_7_8() {
        let td = td_from_field(4, 8).unwrap();
        let drop: Vec<u32> = td.blocks[0][..3].to_vec();
        let g = remove_block_and_points(&td, 0, &drop).unwrap();
        assert_eq!(g.gdd_type().to_string(), "8^1 7^3");
        let census = g.block_size_census();
        assert_eq!(census.get(&4).copied().unwrap_or(0) + census.get(&3).copied().unwrap_or(0), 63);
        // dropping non-collinear points violates the precondition
        let p0 = td.blocks[0][0];
        let bad = vec![p0, td.blocks[0][1], td.blocks[1][2]];
        assert!(remove_block_and_points(&td, 0, &bad).is_err());
    }

    #[test]
    fn cyclic_latin_square_to_td() {
        let sq = LatinSquare::cyclic(4);
        sq.verify().unwrap();
        let td = sq.to_td().unwrap();
        assert_eq!(td.blocks.len(), 16);
    }
}
