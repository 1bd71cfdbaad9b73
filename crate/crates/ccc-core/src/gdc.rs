//! Constructions for constant-composition codes and group divisible codes:
//! development of base codewords, Latin-square GDCs, the prime-power
//! construction, the fundamental (inflation) construction, filling groups,
//! adjoining points, tripling, shortening, and subcode excision.
//!
//! Every constructor verifies its output from scratch before returning it.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{make_field, prime_power_decompose, FiniteField, LatinSquare};
use crate::bounds::{optimal_size, BoundKind};
use crate::codes::{
    verify_code, verify_gdc, BlockDesign, Code, Codeword, Composition, Gdc, GddType,
    GroupPartition,
};
use crate::io::CodePayload;
use crate::{Error, Result};

/// Construction provenance: a tree whose leaves are catalog entries, field
/// constructions, or seeded searches.
#[derive(Clone, Debug)]
pub struct ConstructionNode {
    pub op: String,
    pub params: String,
    pub tag: String,
    pub children: Vec<ConstructionNode>,
}

impl ConstructionNode {
    pub fn leaf(op: &str, params: impl Into<String>, tag: &str) -> Self {
        ConstructionNode {
            op: op.to_string(),
            params: params.into(),
            tag: tag.to_string(),
            children: Vec::new(),
        }
    }

    pub fn node(op: &str, params: impl Into<String>, children: Vec<ConstructionNode>) -> Self {
        ConstructionNode {
            op: op.to_string(),
            params: params.into(),
            tag: String::new(),
            children,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        for _ in 0..depth {
            out.push_str("  ");
        }
        out.push_str(&self.op);
        if !self.params.is_empty() {
            out.push_str(&format!("({})", self.params));
        }
        if !self.tag.is_empty() {
            out.push_str(&format!(" [{}]", self.tag));
        }
        out.push('\n');
        for c in &self.children {
            c.render_into(out, depth + 1);
        }
    }
}

/// How a base codeword set expands into a full code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Development {
    /// Translate by `step` (mod n), `orbit` times per base.
    Shift { step: u32, orbit: u32 },
    /// Words `alpha^{2i} * base + x` for `0 <= i < (n-1)/(2t)` and all x,
    /// over the prime field Z_n.
    PowerCoset { alpha: u32, t: u32 },
}

/// Base codewords plus a development rule, optionally with the period of a
/// residue-class group structure attached to the developed GDC.
#[derive(Clone, Debug)]
pub struct BaseCodewordSet {
    pub n: u32,
    pub comp: Composition,
    pub d: u32,
    pub bases: Vec<Codeword>,
    pub development: Development,
    /// Groups are the residue classes modulo this value when present.
    pub group_stride: Option<u32>,
}

/// Residue-class partition of Z_n modulo `stride`.
pub fn stride_partition(n: u32, stride: u32) -> Result<GroupPartition> {
    if stride == 0 || n % stride != 0 {
        return Err(Error::invalid(format!("stride {stride} does not divide {n}")));
    }
    let groups = (0..stride)
        .map(|r| (0..n).filter(|p| p % stride == r).collect())
        .collect();
    GroupPartition::new(n, groups)
}

/// Expand the base set and verify the developed object. Duplicate words
/// across orbits are an error naming the colliding pair.
pub fn develop(base_set: &BaseCodewordSet) -> Result<CodePayload> {
    let n = base_set.n;
    let mut words: Vec<Codeword> = Vec::new();
    match base_set.development {
        Development::Shift { step, orbit } => {
            for base in &base_set.bases {
                for j in 0..orbit {
                    let shift = (j as u64 * step as u64 % n as u64) as u32;
                    let support: Vec<(u32, u8)> = base
                        .support()
                        .iter()
                        .map(|&(p, s)| ((p + shift) % n, s))
                        .collect();
                    words.push(Codeword::new(n, support)?);
                }
            }
        }
        Development::PowerCoset { alpha, t } => {
            let (_, k) = prime_power_decompose(n).ok_or(Error::NotPrimePower(n as u64))?;
            if k != 1 {
                return Err(Error::invalid(
                    "power development is implemented over prime fields only",
                ));
            }
            if t == 0 || (n - 1) % (2 * t) != 0 {
                return Err(Error::invalid(format!("2t = {} must divide n-1 = {}", 2 * t, n - 1)));
            }
            let reps = (n - 1) / (2 * t);
            let mut multiplier = 1u64;
            let alpha2 = (alpha as u64 * alpha as u64) % n as u64;
            for _ in 0..reps {
                for base in &base_set.bases {
                    for x in 0..n as u64 {
                        let support: Vec<(u32, u8)> = base
                            .support()
                            .iter()
                            .map(|&(pos, s)| (((multiplier * pos as u64 + x) % n as u64) as u32, s))
                            .collect();
                        words.push(Codeword::new(n, support)?);
                    }
                }
                multiplier = multiplier * alpha2 % n as u64;
            }
        }
    }

    let mut seen: std::collections::HashMap<Vec<(u32, u8)>, usize> =
        std::collections::HashMap::new();
    for (i, w) in words.iter().enumerate() {
        if let Some(&j) = seen.get(w.support()) {
            return Err(Error::verification(
                "develop",
                format!("orbit collision: words {j} and {i} both equal {:?}", w.support()),
            ));
        }
        seen.insert(w.support().to_vec(), i);
    }

    let code = Code::new(n, base_set.comp.clone(), base_set.d, words);
    let payload = match base_set.group_stride {
        None => CodePayload::Plain(code),
        Some(stride) => {
            let partition = stride_partition(n, stride)?;
            let d = code.d;
            CodePayload::Grouped(Gdc { partition, code, d })
        }
    };
    payload.verify().into_result("develop")?;
    Ok(payload)
}

/// The distance-4 `[1,1,1]`-GDC of type g^3 and size 3g^2 built from the
/// cyclic Latin square of side g and its two shifts: each cell is emitted in
/// three orientations (row/column/entry rotated through the three groups,
/// with the entry shifted by the orientation index).
pub fn latin_gdc(g: u32) -> Result<Gdc> {
    if g < 3 {
        return Err(Error::invalid("latin_gdc needs g >= 3"));
    }
    let square = LatinSquare::cyclic(g);
    let comp = Composition::quaternary111();
    let n = 3 * g;
    let mut words = Vec::with_capacity((3 * g * g) as usize);
    for r in 0..g {
        for c in 0..g {
            let s0 = square.cell(r, c);
            let s1 = (s0 + 1) % g;
            let s2 = (s0 + 2) % g;
            words.push(Codeword::from_tuple(n, &[r, c + g, s0 + 2 * g], &comp)?);
            words.push(Codeword::from_tuple(n, &[s1 + 2 * g, r, c + g], &comp)?);
            words.push(Codeword::from_tuple(n, &[c + g, s2 + 2 * g, r], &comp)?);
        }
    }
    let partition = GroupPartition::new(
        n,
        vec![(0..g).collect(), (g..2 * g).collect(), (2 * g..3 * g).collect()],
    )?;
    let gdc = Gdc {
        partition,
        code: Code::new(n, comp, 4, words),
        d: 4,
    };
    verify_gdc(&gdc).into_result("latin_gdc")?;
    Ok(gdc)
}

/// Check the two generator conditions of the prime-power construction.
fn generator_conditions(field: &FiniteField, alpha: u32) -> Result<()> {
    if !field.is_generator(alpha) {
        return Err(Error::invalid(format!("{alpha} is not a generator of GF({})", field.q)));
    }
    let qr = field.quadratic_residues()?;
    let am1 = field.sub(alpha, 1);
    if !qr.contains(&am1) {
        return Err(Error::invalid(format!(
            "alpha - 1 = {am1} is not a quadratic residue in GF({})",
            field.q
        )));
    }
    let expr = field.add(field.sub(field.mul(alpha, alpha), alpha), 1);
    if expr == 0 {
        return Err(Error::invalid(format!(
            "alpha^2 - alpha + 1 vanishes for alpha = {alpha} in GF({})",
            field.q
        )));
    }
    Ok(())
}

/// The optimal (n, 4, [1,1,1]) code of size n(n-1)/2 for prime powers
/// n = 3 (mod 4), n >= 11: orbit of <0, 1, alpha> under even generator
/// powers and all translations.
pub fn prime_power_code(n: u32, alpha: u32) -> Result<Code> {
    if n % 4 != 3 || n < 11 {
        return Err(Error::invalid(format!(
            "prime power construction needs n = 3 (mod 4), n >= 11; got {n}"
        )));
    }
    let field = make_field(n)?;
    generator_conditions(&field, alpha)?;
    let comp = Composition::quaternary111();
    let mut words = Vec::with_capacity((n as usize * (n as usize - 1)) / 2);
    let mut m = 1u32; // alpha^{2i}
    let alpha2 = field.mul(alpha, alpha);
    for _ in 0..(n - 1) / 2 {
        let b = m;
        let c = field.mul(m, alpha);
        for x in 0..n {
            words.push(Codeword::from_tuple(
                n,
                &[x, field.add(b, x), field.add(c, x)],
                &comp,
            )?);
        }
        m = field.mul(m, alpha2);
    }
    let code = Code::new(n, comp, 4, words);
    verify_code(&code).into_result("prime_power_code")?;
    if code.len() as u64 != n as u64 * (n as u64 - 1) / 2 {
        return Err(Error::verification(
            "prime_power_code",
            format!("size {} != n(n-1)/2", code.len()),
        ));
    }
    Ok(code)
}

/// Smallest generator of GF(n) meeting both prime-power-construction
/// conditions, in canonical element order.
pub fn find_generator(n: u32) -> Result<Option<u32>> {
    if n % 4 != 3 || n < 11 {
        return Err(Error::invalid(format!(
            "generator search needs n = 3 (mod 4), n >= 11; got {n}"
        )));
    }
    let field = make_field(n)?;
    for a in 2..n {
        if generator_conditions(&field, a).is_ok() {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Search budget for the seeded randomized searches.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_iterations: u64,
    pub max_restarts: u32,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_iterations: 200_000,
            max_restarts: 40,
            seed: 0,
        }
    }
}

/// Seeded search for base codewords whose power-coset development is an
/// optimal (n, 4, [1,1,1]) code, n = 1 (mod 4) prime. The first base is
/// <0, 1, alpha> for the field generator alpha; the remaining t-1 bases are
/// drawn at random and kept while the developed words stay compatible.
pub fn search_base_codewords(
    n: u32,
    t: u32,
    budget: &SearchBudget,
) -> Result<Option<BaseCodewordSet>> {
    if n % 4 != 1 {
        return Err(Error::invalid("base-codeword search needs n = 1 (mod 4)"));
    }
    let (_, k) = prime_power_decompose(n).ok_or(Error::NotPrimePower(n as u64))?;
    if k != 1 {
        return Err(Error::invalid("base-codeword search runs over prime fields"));
    }
    if t == 0 || (n - 1) % (2 * t) != 0 {
        return Err(Error::invalid("2t must divide n - 1"));
    }
    let field = make_field(n)?;
    let alpha = field.generator();
    let comp = Composition::quaternary111();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut iterations = 0u64;

    let candidates: Vec<(u32, u32)> = (1..n)
        .flat_map(|b| (1..n).filter(move |&c| c != b).map(move |c| (b, c)))
        .collect();

    for _restart in 0..budget.max_restarts.max(1) {
        let mut bases = vec![Codeword::from_tuple(n, &[0, 1, alpha], &comp)?];
        let mut order = candidates.clone();
        order.shuffle(&mut rng);
        for &(b, c) in &order {
            if bases.len() as u32 == t {
                break;
            }
            iterations += 1;
            if iterations > budget.max_iterations {
                return Ok(None);
            }
            let cand = Codeword::from_tuple(n, &[0, b, c], &comp)?;
            let mut attempt = bases.clone();
            attempt.push(cand);
            let set = BaseCodewordSet {
                n,
                comp: comp.clone(),
                d: 4,
                bases: attempt.clone(),
                development: Development::PowerCoset { alpha, t },
                group_stride: None,
            };
            if develop(&set).is_ok() {
                bases = attempt;
            }
        }
        if bases.len() as u32 == t {
            let set = BaseCodewordSet {
                n,
                comp: comp.clone(),
                d: 4,
                bases,
                development: Development::PowerCoset { alpha, t },
                group_stride: None,
            };
            // an invalid final development just means this restart failed
            if let Ok(payload) = develop(&set) {
                if payload.len() as u64 == n as u64 * (n as u64 - 1) / 2 {
                    return Ok(Some(set));
                }
            }
        }
    }
    Ok(None)
}

/// Ingredient lookup by type for the fundamental construction.
pub type GdcResolver<'a> = dyn FnMut(&GddType) -> Result<Gdc> + 'a;

/// The fundamental construction for GDCs: replace each point x of the master
/// GDD by omega(x) copies and each block by an ingredient GDC of the matching
/// type. Requires d <= 2(w - 1); the output type sums weights over groups.
pub fn wfc_gdc(master: &BlockDesign, weights: &[u32], resolve: &mut GdcResolver<'_>) -> Result<Gdc> {
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

    let mut words: Vec<Codeword> = Vec::new();
    let mut comp: Option<Composition> = None;
    let mut d: Option<u32> = None;
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
                "wfc_gdc",
                format!("ingredient has type {} need {}", ingredient.gdd_type(), ing_type),
            ));
        }
        if 2 * (ingredient.code.comp.weight() - 1) < ingredient.d {
            return Err(Error::invalid("fundamental construction needs d <= 2(w - 1)"));
        }
        match (&comp, &d) {
            (None, _) => {
                comp = Some(ingredient.code.comp.clone());
                d = Some(ingredient.d);
            }
            (Some(c), Some(dd)) => {
                if *c != ingredient.code.comp || *dd != ingredient.d {
                    return Err(Error::invalid("ingredients disagree on composition or distance"));
                }
            }
            _ => unreachable!(),
        }
        // match ingredient groups to block points by descending weight
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
        for w in &ingredient.code.words {
            let support: Vec<(u32, u8)> = w
                .support()
                .iter()
                .map(|&(p, s)| (map[p as usize], s))
                .collect();
            words.push(Codeword::new(total, support)?);
        }
    }

    let comp = comp.ok_or_else(|| Error::invalid("master has no usable blocks"))?;
    let d = d.unwrap();
    let gdc = Gdc {
        partition,
        code: Code::new(total, comp, d, words),
        d,
    };
    verify_gdc(&gdc).into_result("wfc_gdc")?;
    Ok(gdc)
}

/// Fill the selected groups with codes of the group's length. Requires
/// d <= 2(w-1). Filling everything yields a plain code; partial filling
/// keeps the unfilled groups (filled points become singletons).
pub fn fill_groups(master: &Gdc, fillers: &[(usize, Code)]) -> Result<CodePayload> {
    let w = master.code.comp.weight();
    if master.d > 2 * (w - 1) {
        return Err(Error::invalid("filling groups needs d <= 2(w - 1)"));
    }
    let n = master.code.n;
    let mut words = master.code.words.clone();
    let mut filled = vec![false; master.partition.groups().len()];
    for (gi, filler) in fillers {
        let group = master
            .partition
            .groups()
            .get(*gi)
            .ok_or_else(|| Error::invalid(format!("no group {gi}")))?;
        if filler.n as usize != group.len() {
            return Err(Error::invalid(format!(
                "filler length {} != group size {}",
                filler.n,
                group.len()
            )));
        }
        if filler.comp != master.code.comp {
            return Err(Error::invalid("filler composition mismatch"));
        }
        if filler.d < master.d {
            return Err(Error::invalid("filler distance below the master's"));
        }
        if filled[*gi] {
            return Err(Error::invalid(format!("group {gi} filled twice")));
        }
        filled[*gi] = true;
        for w in &filler.words {
            let support: Vec<(u32, u8)> = w
                .support()
                .iter()
                .map(|&(p, s)| (group[p as usize], s))
                .collect();
            words.push(Codeword::new(n, support)?);
        }
    }
    let code = Code::new(n, master.code.comp.clone(), master.d, words);
    let payload = if filled.iter().all(|&f| f) {
        CodePayload::Plain(code)
    } else {
        let mut groups: Vec<Vec<u32>> = Vec::new();
        for (gi, g) in master.partition.groups().iter().enumerate() {
            if filled[gi] {
                groups.extend(g.iter().map(|&p| vec![p]));
            } else {
                groups.push(g.clone());
            }
        }
        let d = code.d;
        CodePayload::Grouped(Gdc {
            partition: GroupPartition::new(n, groups)?,
            code,
            d,
        })
    };
    payload.verify().into_result("fill_groups")?;
    Ok(payload)
}

/// Convenience: fill every group with the outputs of `make` (one per group).
pub fn fill_all_groups(
    master: &Gdc,
    mut make: impl FnMut(usize, u32) -> Result<Code>,
) -> Result<Code> {
    let mut fillers = Vec::new();
    for (gi, g) in master.partition.groups().iter().enumerate() {
        fillers.push((gi, make(gi, g.len() as u32)?));
    }
    match fill_groups(master, &fillers)? {
        CodePayload::Plain(c) => Ok(c),
        CodePayload::Grouped(_) => unreachable!("all groups filled"),
    }
}

/// Adjoin `y` new points shared across ingredient codes: the cap code covers
/// one chosen group plus Y (or just Y when `cap_group` is `None`), and each
/// armed group gets a GDC of type 1^g y^1 whose y-group lands on Y.
///
/// Conventions: the cap code's last y points are Y; each arm GDC's unique
/// y-sized group must be its last y points. Groups neither capped nor armed
/// persist (partial adjoining, allowed for y <= 1); with exactly one such
/// group, Y merges into it.
pub fn adjoin_points(
    master: &Gdc,
    y: u32,
    cap_group: Option<usize>,
    cap: &Code,
    arms: &[(usize, Gdc)],
) -> Result<CodePayload> {
    let w = master.code.comp.weight();
    if master.d > 2 * (w - 1) {
        return Err(Error::invalid("adjoining points needs d <= 2(w - 1)"));
    }
    let n = master.code.n;
    let total = n + y;
    let comp = &master.code.comp;

    let mut words: Vec<Codeword> = master
        .code
        .words
        .iter()
        .map(|w| Codeword::new(total, w.support().to_vec()))
        .collect::<Result<_>>()?;

    let mut used = vec![false; master.partition.groups().len()];

    let cap_len = match cap_group {
        Some(gi) => {
            let group = master
                .partition
                .groups()
                .get(gi)
                .ok_or_else(|| Error::invalid(format!("no group {gi}")))?;
            used[gi] = true;
            group.len() as u32 + y
        }
        None => y,
    };
    if cap.n != cap_len {
        return Err(Error::invalid(format!("cap length {} != group + y = {cap_len}", cap.n)));
    }
    if cap.comp != *comp || cap.d < master.d {
        return Err(Error::invalid("cap composition/distance mismatch"));
    }
    {
        let map: Vec<u32> = match cap_group {
            Some(gi) => {
                let group = &master.partition.groups()[gi];
                group.iter().copied().chain(n..total).collect()
            }
            None => (n..total).collect(),
        };
        for w in &cap.words {
            let support: Vec<(u32, u8)> = w
                .support()
                .iter()
                .map(|&(p, s)| (map[p as usize], s))
                .collect();
            words.push(Codeword::new(total, support)?);
        }
    }

    for (gi, arm) in arms {
        let group = master
            .partition
            .groups()
            .get(*gi)
            .ok_or_else(|| Error::invalid(format!("no group {gi}")))?;
        if used[*gi] {
            return Err(Error::invalid(format!("group {gi} capped and armed")));
        }
        used[*gi] = true;
        let g = group.len() as u32;
        if arm.code.n != g + y {
            return Err(Error::invalid(format!(
                "arm length {} != group + y = {}",
                arm.code.n,
                g + y
            )));
        }
        if arm.code.comp != *comp || arm.d < master.d {
            return Err(Error::invalid("arm composition/distance mismatch"));
        }
        let arm_type = arm.gdd_type();
        let ok_type = if y <= 1 {
            arm_type == GddType::new(vec![(1, g + y)]).unwrap()
        } else {
            arm_type == GddType::new(vec![(1, g), (y, 1)]).unwrap()
        };
        if !ok_type {
            return Err(Error::invalid(format!("arm type {arm_type} is not 1^{g} {y}^1")));
        }
        if y >= 2 {
            let last: Vec<u32> = (g..g + y).collect();
            if !arm
                .partition
                .groups()
                .iter()
                .any(|grp| grp.as_slice() == last.as_slice())
            {
                return Err(Error::invalid("arm's y-group must be its last y points"));
            }
        }
        let map: Vec<u32> = group.iter().copied().chain(n..total).collect();
        for w in &arm.code.words {
            let support: Vec<(u32, u8)> = w
                .support()
                .iter()
                .map(|&(p, s)| (map[p as usize], s))
                .collect();
            words.push(Codeword::new(total, support)?);
        }
    }

    let unfilled: Vec<usize> = (0..used.len()).filter(|&i| !used[i]).collect();
    let code = Code::new(total, comp.clone(), master.d, words);
    let payload = if unfilled.is_empty() {
        CodePayload::Plain(code)
    } else {
        if y > 1 {
            return Err(Error::invalid("partial adjoining is supported for y <= 1 only"));
        }
        let mut groups: Vec<Vec<u32>> = Vec::new();
        let absorb = unfilled.len() == 1;
        for (gi, g) in master.partition.groups().iter().enumerate() {
            if used[gi] {
                groups.extend(g.iter().map(|&p| vec![p]));
            } else {
                let mut grp = g.clone();
                if absorb {
                    grp.extend(n..total);
                }
                groups.push(grp);
            }
        }
        if !absorb {
            groups.extend((n..total).map(|p| vec![p]));
        }
        let d = code.d;
        CodePayload::Grouped(Gdc {
            partition: GroupPartition::new(total, groups)?,
            code,
            d,
        })
    };
    payload.verify().into_result("adjoin_points")?;
    Ok(payload)
}

/// Tripling: from a known-optimal odd-length (n, 4, [1,1,1]) code, the 3n
/// code (fill the type n^3 GDC) and the 3(n-1)+1 code (adjoin one point to
/// the type (n-1)^3 GDC). Outputs are verified; their optimality is
/// certified separately.
pub fn triple(c: &Code) -> Result<(Code, Code)> {
    let n = c.n;
    if c.comp != Composition::quaternary111() || c.d != 4 {
        return Err(Error::invalid("tripling expects a (n, 4, [1,1,1]) code"));
    }
    let table = optimal_size(4, n, 4, &c.comp)?;
    match table.kind {
        BoundKind::Exact if table.value == Some(c.len() as u64) => {}
        _ => {
            return Err(Error::invalid(format!(
                "tripling input of size {} is not a known-optimal code",
                c.len()
            )))
        }
    }
    verify_code(c).into_result("triple input")?;

    let big = latin_gdc(n)?;
    let filled = fill_all_groups(&big, |_, _| Ok(c.clone()))?;

    let small = latin_gdc(n - 1)?;
    let arm = c.clone().into_unit_gdc();
    let adjoined = adjoin_points(&small, 1, Some(0), c, &[(1, arm.clone()), (2, arm)])?;
    let adjoined = match adjoined {
        CodePayload::Plain(code) => code,
        CodePayload::Grouped(_) => unreachable!("all groups covered"),
    };
    Ok((filled, adjoined))
}

/// Delete a minimum-occupancy coordinate from an optimal odd-length
/// (n, 4, [1,1,1]) code: at most 3(n-1)/2 words vanish, so the result meets
/// the even-length bound.
pub fn shorten(c: &Code) -> Result<Code> {
    let n = c.n;
    if n % 2 != 1 || c.comp != Composition::quaternary111() || c.d != 4 {
        return Err(Error::invalid("shortening expects an odd-length (n, 4, [1,1,1]) code"));
    }
    if c.len() as u64 != n as u64 * (n as u64 - 1) / 2 {
        return Err(Error::invalid(format!(
            "shortening expects size n(n-1)/2 = {}, got {}",
            n as u64 * (n as u64 - 1) / 2,
            c.len()
        )));
    }
    let mut occupancy = vec![0u32; n as usize];
    for w in &c.words {
        for &(p, _) in w.support() {
            occupancy[p as usize] += 1;
        }
    }
    let (coord, &count) = occupancy.iter().enumerate().min_by_key(|&(_, &c)| c).unwrap();
    let average_num = 3 * (n as u64 - 1);
    assert!(
        2 * count as u64 <= average_num,
        "a coordinate at or below the average occupancy always exists"
    );
    let coord = coord as u32;
    let map: Vec<u32> = (0..n).map(|p| if p > coord { p - 1 } else { p }).collect();
    let words: Vec<Codeword> = c
        .words
        .iter()
        .filter(|w| w.symbol_at(coord) == 0)
        .map(|w| {
            Codeword::new(
                n - 1,
                w.support()
                    .iter()
                    .map(|&(p, s)| (map[p as usize], s))
                    .collect(),
            )
        })
        .collect::<Result<_>>()?;
    let out = Code::new(n - 1, c.comp.clone(), c.d, words);
    verify_code(&out).into_result("shorten")?;
    Ok(out)
}

/// Remove the words fully supported inside S; the remainder is a GDC whose
/// groups are S plus singletons outside S.
pub fn excise_subcode(c: &Code, s: &BTreeSet<u32>) -> Result<Gdc> {
    let n = c.n;
    let words: Vec<Codeword> = c
        .words
        .iter()
        .filter(|w| !w.support().iter().all(|(p, _)| s.contains(p)))
        .cloned()
        .collect();
    let mut groups: Vec<Vec<u32>> = Vec::new();
    if !s.is_empty() {
        groups.push(s.iter().copied().collect());
    }
    for p in 0..n {
        if !s.contains(&p) {
            groups.push(vec![p]);
        }
    }
    let gdc = Gdc {
        partition: GroupPartition::new(n, groups)?,
        code: Code::new(n, c.comp.clone(), c.d, words),
        d: c.d,
    };
    verify_gdc(&gdc).into_result("excise_subcode")?;
    Ok(gdc)
}

/// Optimal (n, 5, [1,1,1]) codes: a single word up to n = 4, hand-built
/// pairs/quadruples at n = 5, 6, and the cyclic <0,1,3> orbit beyond (its
/// six pairwise difference values stay distinct once n >= 7).
pub fn d5_code(n: u32) -> Result<Code> {
    let comp = Composition::quaternary111();
    if n < 3 {
        return Err(Error::invalid("weight-3 words need n >= 3"));
    }
    let words: Vec<Codeword> = match n {
        3 | 4 => vec![Codeword::from_tuple(n, &[0, 1, 2], &comp)?],
        5 => vec![
            Codeword::from_tuple(n, &[0, 1, 2], &comp)?,
            Codeword::from_tuple(n, &[2, 3, 4], &comp)?,
        ],
        6 => vec![
            Codeword::from_tuple(n, &[0, 1, 2], &comp)?,
            Codeword::from_tuple(n, &[2, 3, 4], &comp)?,
            Codeword::from_tuple(n, &[4, 0, 5], &comp)?,
            Codeword::from_tuple(n, &[1, 5, 3], &comp)?,
        ],
        _ => (0..n)
            .map(|x| Codeword::from_tuple(n, &[x, (x + 1) % n, (x + 3) % n], &comp))
            .collect::<Result<_>>()?,
    };
    let code = Code::new(n, comp, 5, words);
    verify_code(&code).into_result("d5_code")?;
    Ok(code)
}

/// Slot-perfect (m, 3, [1,1,1]) codes of size m(m-1) from a linear
/// orthomorphism-style map: words <x, x+b, x+k*b> over all x and b != 0.
/// Over Z_m this needs k(k-1)(k+1)(2k-1)(k-2) coprime to m (k = 3 works for
/// m coprime to 30); over GF(2^e) any k outside {0,1} with k^2+k+1 != 0.
/// Lengths without such a map are served by stored codes instead.
pub fn d3_linear_code(m: u32) -> Result<Code> {
    let comp = Composition::quaternary111();
    if m == 3 {
        let words = vec![
            Codeword::new(3, vec![(0, 1), (1, 2), (2, 3)])?,
            Codeword::new(3, vec![(0, 3), (1, 1), (2, 2)])?,
            Codeword::new(3, vec![(0, 2), (1, 3), (2, 1)])?,
        ];
        let code = Code::new(3, comp, 3, words);
        verify_code(&code).into_result("d3_linear_code")?;
        return Ok(code);
    }
    enum Arith {
        Modular(u64),
        Binary(FiniteField, u32),
    }
    let arith = if m % 2 == 1 {
        let k = 3u64;
        let product: u64 = (k - 1) * k * (k + 1) * (2 * k - 1) * (k - 2).max(1);
        if gcd(product, m as u64) != 1 {
            return Err(Error::invalid(format!(
                "no linear slot-perfect construction modulo {m}"
            )));
        }
        Arith::Modular(k)
    } else if m.is_power_of_two() && m >= 8 {
        let field = make_field(m)?;
        let k = (2..m)
            .find(|&k| field.add(field.add(field.mul(k, k), k), 1) != 0)
            .ok_or_else(|| Error::invalid("no usable multiplier in GF(2^e)"))?;
        Arith::Binary(field, k)
    } else {
        return Err(Error::invalid(format!("no linear slot-perfect construction for m = {m}")));
    };

    let mut words = Vec::with_capacity((m as usize) * (m as usize - 1));
    for b in 1..m {
        for x in 0..m {
            let (second, third) = match &arith {
                Arith::Modular(k) => ((x + b) % m, ((x as u64 + k * b as u64) % m as u64) as u32),
                Arith::Binary(f, k) => (f.add(x, b), f.add(x, f.mul(*k, b))),
            };
            words.push(Codeword::from_tuple(m, &[x, second, third], &comp)?);
        }
    }
    let code = Code::new(m, comp, 3, words);
    verify_code(&code).into_result("d3_linear_code")?;
    Ok(code)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_2_3_gdc_develops() {
        // cyclic shifts of 210001 with residue groups mod 3
        let comp = Composition::ternary21();
        let set = BaseCodewordSet {
            n: 6,
            comp: comp.clone(),
            d: 4,
            bases: vec![Codeword::from_tuple(6, &[1, 5, 0], &comp).unwrap()],
            development: Development::Shift { step: 1, orbit: 6 },
            group_stride: Some(3),
        };
        let payload = develop(&set).unwrap();
        assert_eq!(payload.len(), 6);
        match payload {
            CodePayload::Grouped(g) => assert_eq!(g.gdd_type().to_string(), "2^3"),
            _ => panic!("expected a GDC"),
        }
    }

    #[test]
    fn example_3_5_gdc_develops() {
        let comp = Composition::ternary21();
        let bases = [[0, 1, 3], [0, 4, 12], [0, 6, 13]]
            .iter()
            .map(|t| Codeword::from_tuple(15, t, &comp).unwrap())
            .collect();
        let set = BaseCodewordSet {
            n: 15,
            comp,
            d: 4,
            bases,
            development: Development::Shift { step: 1, orbit: 15 },
            group_stride: Some(5),
        };
        let payload = develop(&set).unwrap();
        assert_eq!(payload.len(), 45);
        match payload {
            CodePayload::Grouped(g) => assert_eq!(g.gdd_type().to_string(), "3^5"),
            _ => panic!("expected a GDC"),
        }
    }

    #[test]
    fn duplicate_orbits_are_rejected() {
        let comp = Composition::ternary21();
        let base = Codeword::from_tuple(6, &[1, 5, 0], &comp).unwrap();
        let set = BaseCodewordSet {
            n: 6,
            comp,
            d: 4,
            bases: vec![base.clone(), base],
            development: Development::Shift { step: 1, orbit: 6 },
            group_stride: None,
        };
        let err = develop(&set).unwrap_err();
        assert!(err.to_string().contains("collision"), "{err}");
    }

    #[test]
    fn latin_gdc_sizes() {
        for g in [3u32, 10, 11] {
            let gdc = latin_gdc(g).unwrap();
            assert_eq!(gdc.len() as u32, 3 * g * g);
            assert_eq!(gdc.gdd_type(), GddType::new(vec![(g, 3)]).unwrap());
        }
        assert!(latin_gdc(2).is_err());
    }

    #[test]
    fn prime_power_construction_values() {
        let code = prime_power_code(11, 2).unwrap();
        assert_eq!(code.len(), 55);
        let code = prime_power_code(19, 2).unwrap();
        assert_eq!(code.len(), 171);
        let err = prime_power_code(19, 3).unwrap_err();
        assert!(
            err.to_string().contains("generator") || err.to_string().contains("residue"),
            "{err}"
        );
    }

    #[test]
    fn find_generator_values() {
        assert_eq!(find_generator(59).unwrap(), Some(2));
        let a = find_generator(47).unwrap().unwrap();
        assert!(prime_power_code(47, a).is_ok());
        assert!(prime_power_code(47, 5).is_ok());
        assert!(find_generator(7).is_err());
    }

    #[test]
    fn d5_codes_meet_their_sizes() {
        for (n, size) in [(3, 1), (4, 1), (5, 2), (6, 4), (7, 7), (20, 20), (41, 41)] {
            let code = d5_code(n).unwrap();
            assert_eq!(code.len() as u32, size, "n={n}");
        }
    }

    #[test]
    fn d3_linear_codes_are_slot_perfect() {
        for m in [7u32, 11, 13, 29, 31, 37, 49, 8, 16, 32] {
            let code = d3_linear_code(m).unwrap();
            assert_eq!(code.len() as u64, m as u64 * (m as u64 - 1), "m={m}");
        }
        assert_eq!(d3_linear_code(3).unwrap().len(), 3);
        assert!(d3_linear_code(9).is_err());
        assert!(d3_linear_code(10).is_err());
    }

    #[test]
    fn excise_and_shorten() {
        let code = prime_power_code(11, 2).unwrap();
        let gdc = excise_subcode(&code, &BTreeSet::new()).unwrap();
        assert_eq!(gdc.len(), 55);
        assert_eq!(gdc.gdd_type().to_string(), "1^11");
        let short = shorten(&code).unwrap();
        assert_eq!(short.n, 10);
        assert!(short.len() as u64 >= 40);
    }

    #[test]
    fn tripling_from_11() {
        let code = prime_power_code(11, 2).unwrap();
        let (c33, c31) = triple(&code).unwrap();
        assert_eq!(c33.n, 33);
        assert_eq!(c33.len(), 3 * 121 + 3 * 55);
        assert_eq!(c31.n, 31);
        assert_eq!(c31.len(), 300 + 55 + 2 * 55);
    }

    #[test]
    fn fill_partial_keeps_groups() {
        // fill 4 of 5 groups of the type 3^5 GDC -> type 1^12 3^1, size 49
        let comp = Composition::ternary21();
        let bases = [[0, 1, 3], [0, 4, 12], [0, 6, 13]]
            .iter()
            .map(|t| Codeword::from_tuple(15, t, &comp).unwrap())
            .collect();
        let set = BaseCodewordSet {
            n: 15,
            comp: comp.clone(),
            d: 4,
            bases,
            development: Development::Shift { step: 1, orbit: 15 },
            group_stride: Some(5),
        };
        let gdc = match develop(&set).unwrap() {
            CodePayload::Grouped(g) => g,
            _ => unreachable!(),
        };
        let one_word = Code::new(
            3,
            comp.clone(),
            4,
            vec![Codeword::from_tuple(3, &[0, 1, 2], &comp).unwrap()],
        );
        let all = fill_groups(
            &gdc,
            &(0..5).map(|i| (i, one_word.clone())).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(all.len(), 50);
        assert!(matches!(all, CodePayload::Plain(_)));
        let partial = fill_groups(
            &gdc,
            &(0..4).map(|i| (i, one_word.clone())).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(partial.len(), 49);
        match partial {
            CodePayload::Grouped(g) => {
                assert_eq!(g.gdd_type(), GddType::new(vec![(1, 12), (3, 1)]).unwrap())
            }
            _ => panic!("expected a GDC"),
        }
    }

    #[test]
    fn search_finds_nothing_for_open_case() {
        let budget = SearchBudget {
            max_iterations: 3_000,
            max_restarts: 2,
            seed: 0,
        };
        let out = search_base_codewords(13, 1, &budget).unwrap();
        assert!(out.is_none());
    }
}
