//! Finite dynamical systems `(X, eta)` with `X = {0, .., n-1}`.
//!
//! The functional graph of a self-map of a finite set decomposes into
//! components, each a single cycle with rooted in-trees hanging off the cycle
//! points. Conjugacy is decided by comparing canonical encodings of that
//! structure (AHU codes for the trees, least rotation for the cycles); a
//! witness bijection is then assembled by walking matching components.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest size accepted by [`brute_force_conjugate`].
pub const BRUTE_FORCE_LIMIT: usize = 9;

/// A self-map of `{0, .., n-1}`, stored as its value table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SystemJson", into = "SystemJson")]
pub struct FiniteDynSys {
    map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    n: usize,
    map: Vec<usize>,
}

impl TryFrom<SystemJson> for FiniteDynSys {
    type Error = Error;

    fn try_from(j: SystemJson) -> Result<Self> {
        if j.map.len() != j.n {
            return Err(Error::InvalidSystem(format!(
                "n = {} but map has {} entries",
                j.n,
                j.map.len()
            )));
        }
        FiniteDynSys::new(j.map)
    }
}

impl From<FiniteDynSys> for SystemJson {
    fn from(s: FiniteDynSys) -> Self {
        SystemJson {
            n: s.map.len(),
            map: s.map,
        }
    }
}

impl FiniteDynSys {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(Error::InvalidSystem("size must be at least 1".into()));
        }
        if let Some((i, &v)) = map.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(Error::InvalidSystem(format!(
                "map[{i}] = {v} is outside [0, {n})"
            )));
        }
        Ok(FiniteDynSys { map })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).collect())
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `eta(x)`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `eta^(k)(x)`, the k-fold iterate.
    pub fn iterate(&self, x: usize, k: usize) -> usize {
        (0..k).fold(x, |y, _| self.map[y])
    }

    /// Value table of `eta^(k)`.
    pub fn power_table(&self, k: usize) -> Vec<usize> {
        let mut table: Vec<usize> = (0..self.size()).collect();
        for _ in 0..k {
            for v in table.iter_mut() {
                *v = self.map[*v];
            }
        }
        table
    }

    pub fn is_fixed(&self, x: usize) -> bool {
        self.map[x] == x
    }

    pub fn check_point(&self, x: usize) -> Result<()> {
        if x < self.size() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange(x))
        }
    }

    /// The system `sigma . eta . sigma^-1`, i.e. the copy of `self` with point
    /// `i` renamed to `sigma[i]`.
    pub fn relabel(&self, sigma: &[usize]) -> Result<Self> {
        check_permutation(sigma, self.size())?;
        let mut map = vec![0; self.size()];
        for (i, &e) in self.map.iter().enumerate() {
            map[sigma[i]] = sigma[e];
        }
        Self::new(map)
    }

    /// Preimages of every point, each list sorted ascending.
    pub fn preimages(&self) -> Vec<Vec<usize>> {
        let mut pre = vec![Vec::new(); self.size()];
        for (i, &e) in self.map.iter().enumerate() {
            pre[e].push(i);
        }
        pre
    }
}

impl fmt::Display for FiniteDynSys {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.map)
    }
}

pub fn fixed_points(sys: &FiniteDynSys) -> BTreeSet<usize> {
    (0..sys.size()).filter(|&i| sys.is_fixed(i)).collect()
}

/// A permutation `sigma` with `sigma(eta1(i)) = eta2(sigma(i))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConjugacyWitness {
    bijection: Vec<usize>,
}

impl ConjugacyWitness {
    /// Validates `bijection` as a conjugacy from `from` to `to`.
    pub fn new(bijection: Vec<usize>, from: &FiniteDynSys, to: &FiniteDynSys) -> Result<Self> {
        let w = ConjugacyWitness { bijection };
        w.check(from, to)?;
        Ok(w)
    }

    pub fn identity(n: usize) -> Self {
        ConjugacyWitness {
            bijection: (0..n).collect(),
        }
    }

    pub fn bijection(&self) -> &[usize] {
        &self.bijection
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.bijection[x]
    }

    pub fn inverse_table(&self) -> Vec<usize> {
        let mut inv = vec![0; self.bijection.len()];
        for (i, &s) in self.bijection.iter().enumerate() {
            inv[s] = i;
        }
        inv
    }

    /// Direct composition check of the intertwining relation.
    pub fn intertwines(&self, from: &FiniteDynSys, to: &FiniteDynSys) -> bool {
        self.bijection.len() == from.size()
            && from.size() == to.size()
            && (0..from.size()).all(|i| self.apply(from.apply(i)) == to.apply(self.apply(i)))
    }

    pub fn check(&self, from: &FiniteDynSys, to: &FiniteDynSys) -> Result<()> {
        if from.size() != to.size() {
            return Err(Error::SystemMismatch {
                left: from.size(),
                right: to.size(),
            });
        }
        check_permutation(&self.bijection, from.size())
            .map_err(|e| Error::InvalidWitness(e.to_string()))?;
        if !self.intertwines(from, to) {
            return Err(Error::InvalidWitness(
                "sigma(eta1(i)) != eta2(sigma(i)) for some i".into(),
            ));
        }
        Ok(())
    }
}

fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    if sigma.len() != n {
        return Err(Error::InvalidWitness(format!(
            "bijection has length {}, expected {n}",
            sigma.len()
        )));
    }
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidWitness(format!(
                "{sigma:?} is not a permutation of 0..{n}"
            )));
        }
    }
    Ok(())
}

/// Cycles and hanging trees of a functional graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitStructure {
    /// Each cycle starts at its smallest point and follows `eta`; cycles are
    /// ordered by that smallest point.
    pub cycles: Vec<Vec<usize>>,
    /// `trees[c][k]` is the AHU code of the in-tree rooted at `cycles[c][k]`
    /// (the root plus all non-cycle points whose orbit enters the cycle there).
    pub trees: Vec<Vec<String>>,
}

impl OrbitStructure {
    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }
}

/// Per-point data shared by `orbit_structure` and the witness builder.
struct Decomposition {
    cycles: Vec<Vec<usize>>,
    on_cycle: Vec<bool>,
    /// Tree children: preimages not on a cycle.
    children: Vec<Vec<usize>>,
    /// AHU code of the subtree rooted at each point (cycle points included,
    /// counting only their off-cycle preimages).
    codes: Vec<String>,
}

fn decompose(sys: &FiniteDynSys) -> Decomposition {
    let n = sys.size();
    // 0 = unvisited, 1 = on current walk, 2 = done
    let mut state = vec![0u8; n];
    let mut on_cycle = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut x = start;
        while state[x] == 0 {
            state[x] = 1;
            path.push(x);
            x = sys.apply(x);
        }
        if state[x] == 1 {
            let pos = path.iter().position(|&p| p == x).unwrap();
            let cyc = &path[pos..];
            let min_pos = cyc
                .iter()
                .enumerate()
                .min_by_key(|(_, &v)| v)
                .map(|(i, _)| i)
                .unwrap();
            let mut rotated = cyc[min_pos..].to_vec();
            rotated.extend_from_slice(&cyc[..min_pos]);
            for &c in &rotated {
                on_cycle[c] = true;
            }
            cycles.push(rotated);
        }
        for p in path {
            state[p] = 2;
        }
    }
    cycles.sort_by_key(|c| c[0]);

    let mut children = vec![Vec::new(); n];
    for i in 0..n {
        if !on_cycle[i] {
            children[sys.apply(i)].push(i);
        }
    }

    // Post-order over the forest: process points by decreasing depth.
    let mut depth = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<usize> = (0..n).filter(|&i| on_cycle[i]).collect();
    for &r in &stack {
        depth[r] = 0;
    }
    while let Some(v) = stack.pop() {
        order.push(v);
        for &c in &children[v] {
            depth[c] = depth[v] + 1;
            stack.push(c);
        }
    }
    let mut codes = vec![String::new(); n];
    for &v in order.iter().rev() {
        let mut child_codes: Vec<&str> = children[v].iter().map(|&c| codes[c].as_str()).collect();
        child_codes.sort_unstable();
        let mut code =
            String::with_capacity(2 + child_codes.iter().map(|c| c.len()).sum::<usize>());
        code.push('(');
        for c in child_codes {
            code.push_str(c);
        }
        code.push(')');
        codes[v] = code;
    }

    Decomposition {
        cycles,
        on_cycle,
        children,
        codes,
    }
}

pub fn orbit_structure(sys: &FiniteDynSys) -> OrbitStructure {
    let d = decompose(sys);
    let trees = d
        .cycles
        .iter()
        .map(|c| c.iter().map(|&p| d.codes[p].clone()).collect())
        .collect();
    OrbitStructure {
        cycles: d.cycles,
        trees,
    }
}

/// Start index of the lexicographically least rotation of `seq`.
fn least_rotation<T: Ord>(seq: &[T]) -> usize {
    let len = seq.len();
    (0..len)
        .min_by(|&a, &b| {
            let ra = seq[a..].iter().chain(&seq[..a]);
            let rb = seq[b..].iter().chain(&seq[..b]);
            ra.cmp(rb)
        })
        .unwrap_or(0)
}

/// Component encodings with the cycle rotated to its least rotation.
/// Returns `(encoding, rotated cycle)` sorted by encoding.
fn component_codes(d: &Decomposition) -> Vec<(String, Vec<usize>)> {
    let mut comps: Vec<(String, Vec<usize>)> = d
        .cycles
        .iter()
        .map(|cyc| {
            let seq: Vec<&str> = cyc.iter().map(|&p| d.codes[p].as_str()).collect();
            let r = least_rotation(&seq);
            let rotated: Vec<usize> = cyc[r..].iter().chain(&cyc[..r]).copied().collect();
            let mut enc = format!("{}:", cyc.len());
            for &p in &rotated {
                enc.push_str(&d.codes[p]);
            }
            (enc, rotated)
        })
        .collect();
    comps.sort_by(|a, b| a.0.cmp(&b.0));
    comps
}

/// Complete conjugacy invariant: two systems are conjugate iff their
/// canonical strings are equal.
pub fn canonical_form(sys: &FiniteDynSys) -> String {
    let d = decompose(sys);
    component_codes(&d)
        .into_iter()
        .map(|(e, _)| e)
        .collect::<Vec<_>>()
        .join(";")
}

/// Decides conjugacy, returning a witness bijection when one exists.
pub fn are_conjugate(a: &FiniteDynSys, b: &FiniteDynSys) -> Option<ConjugacyWitness> {
    if a.size() != b.size() {
        return None;
    }
    let da = decompose(a);
    let db = decompose(b);
    let ca = component_codes(&da);
    let cb = component_codes(&db);
    if ca.len() != cb.len() || ca.iter().zip(&cb).any(|(x, y)| x.0 != y.0) {
        return None;
    }

    let n = a.size();
    let mut sigma = vec![usize::MAX; n];
    let mut stack = Vec::new();
    for ((_, cyc_a), (_, cyc_b)) in ca.iter().zip(&cb) {
        for (&p, &q) in cyc_a.iter().zip(cyc_b) {
            stack.push((p, q));
        }
    }
    while let Some((p, q)) = stack.pop() {
        sigma[p] = q;
        let mut kids_a = da.children[p].clone();
        let mut kids_b = db.children[q].clone();
        kids_a.sort_by(|&x, &y| da.codes[x].cmp(&da.codes[y]));
        kids_b.sort_by(|&x, &y| db.codes[x].cmp(&db.codes[y]));
        debug_assert_eq!(kids_a.len(), kids_b.len());
        stack.extend(kids_a.into_iter().zip(kids_b));
    }
    debug_assert!(da.on_cycle.len() == n && sigma.iter().all(|&s| s < n));
    let w = ConjugacyWitness { bijection: sigma };
    debug_assert!(w.intertwines(a, b));
    Some(w)
}

/// Exhaustive search over bijections, pruned by backtracking on the
/// intertwining relation. Test oracle for [`are_conjugate`]; it uses no
/// structural invariants.
pub fn brute_force_conjugate(
    a: &FiniteDynSys,
    b: &FiniteDynSys,
) -> Result<Option<ConjugacyWitness>> {
    if a.size() != b.size() {
        return Ok(None);
    }
    let n = a.size();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::OracleTooLarge(n));
    }
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(a, b, 0, &mut sigma, &mut used) {
        Ok(Some(ConjugacyWitness { bijection: sigma }))
    } else {
        Ok(None)
    }
}

fn search(
    a: &FiniteDynSys,
    b: &FiniteDynSys,
    i: usize,
    sigma: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = a.size();
    if i == n {
        return true;
    }
    for v in 0..n {
        if used[v] {
            continue;
        }
        sigma[i] = v;
        // every relation whose two endpoints are now assigned must hold
        let consistent = (0..=i).all(|j| {
            let e = a.apply(j);
            e > i || sigma[e] == b.apply(sigma[j])
        });
        if consistent {
            used[v] = true;
            if search(a, b, i + 1, sigma, used) {
                return true;
            }
            used[v] = false;
        }
    }
    sigma[i] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn sys(map: &[usize]) -> FiniteDynSys {
        FiniteDynSys::new(map.to_vec()).unwrap()
    }

    /// Plain enumeration of all n! bijections.
    fn all_witnesses(a: &FiniteDynSys, b: &FiniteDynSys) -> Vec<Vec<usize>> {
        let n = a.size();
        (0..n)
            .permutations(n)
            .filter(|s| (0..n).all(|i| s[a.apply(i)] == b.apply(s[i])))
            .collect()
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteDynSys::new(vec![]).is_err());
        assert!(FiniteDynSys::new(vec![0, 2]).is_err());
        let bad: std::result::Result<FiniteDynSys, _> =
            serde_json::from_str(r#"{"n": 3, "map": [0, 1]}"#);
        assert!(bad.is_err());
        let ok: FiniteDynSys = serde_json::from_str(r#"{"n": 2, "map": [1, 0]}"#).unwrap();
        assert_eq!(ok.map(), &[1, 0]);
        assert_eq!(
            serde_json::to_string(&ok).unwrap(),
            r#"{"n":2,"map":[1,0]}"#
        );
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(
            fixed_points(&FiniteDynSys::identity(3).unwrap()),
            BTreeSet::from([0, 1, 2])
        );
        assert!(fixed_points(&sys(&[1, 0])).is_empty());
        assert_eq!(fixed_points(&sys(&[0, 0, 1])), BTreeSet::from([0]));
    }

    #[test]
    fn orbit_structure_examples() {
        let id = orbit_structure(&FiniteDynSys::identity(2).unwrap());
        assert_eq!(id.cycles, vec![vec![0], vec![1]]);
        assert_eq!(
            id.trees,
            vec![vec!["()".to_string()], vec!["()".to_string()]]
        );

        let swap = orbit_structure(&sys(&[1, 0]));
        assert_eq!(swap.cycles, vec![vec![0, 1]]);

        // 0 <- 1 <- 2, a path of length two into the fixed point 0
        let chain = orbit_structure(&sys(&[0, 0, 1]));
        assert_eq!(chain.cycles, vec![vec![0]]);
        assert_eq!(chain.trees, vec![vec!["((()))".to_string()]]);
    }

    #[test]
    fn cycles_start_at_smallest_point() {
        let s = orbit_structure(&sys(&[3, 4, 0, 2, 1]));
        assert_eq!(s.cycles, vec![vec![0, 3, 2], vec![1, 4]]);
        assert_eq!(s.cycle_lengths(), vec![3, 2]);
    }

    #[test]
    fn canonical_form_examples() {
        let id1 = FiniteDynSys::identity(1).unwrap();
        assert_eq!(canonical_form(&id1), canonical_form(&id1));
        assert_ne!(canonical_form(&sys(&[1, 0])), canonical_form(&sys(&[0, 1])));

        let a = sys(&[1, 2, 0, 0]);
        let b = a.relabel(&[2, 0, 1, 3]).unwrap();
        assert_eq!(b.map(), &[1, 2, 0, 2]);
        assert!(!all_witnesses(&a, &b).is_empty());
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn hair_placement_up_to_rotation() {
        // 3-cycle with hairs on adjacent cycle points, rotated: conjugate
        let a = sys(&[1, 2, 0, 0, 1]);
        let b = sys(&[1, 2, 0, 1, 2]);
        assert!(!all_witnesses(&a, &b).is_empty());
        assert_eq!(canonical_form(&a), canonical_form(&b));
        // 4-cycle, hairs on adjacent vs opposite points: not conjugate
        let c = sys(&[1, 2, 3, 0, 0, 1]);
        let d = sys(&[1, 2, 3, 0, 0, 2]);
        assert!(all_witnesses(&c, &d).is_empty());
        assert_ne!(canonical_form(&c), canonical_form(&d));
        assert!(are_conjugate(&c, &d).is_none());
    }

    #[test]
    fn conjugacy_examples() {
        let id3 = FiniteDynSys::identity(3).unwrap();
        let w = are_conjugate(&id3, &id3).unwrap();
        assert_eq!(w.bijection(), &[0, 1, 2]);

        assert!(are_conjugate(&sys(&[1, 0]), &sys(&[0, 1])).is_none());

        let a = sys(&[1, 2, 0, 0]);
        let b = a.relabel(&[2, 0, 1, 3]).unwrap();
        let w = are_conjugate(&a, &b).unwrap();
        assert!(w.intertwines(&a, &b));
        assert!(ConjugacyWitness::new(w.bijection().to_vec(), &a, &b).is_ok());
    }

    #[test]
    fn brute_force_examples() {
        let id2 = FiniteDynSys::identity(2).unwrap();
        assert_eq!(
            brute_force_conjugate(&id2, &id2)
                .unwrap()
                .unwrap()
                .bijection(),
            &[0, 1]
        );

        let swap = sys(&[1, 0]);
        let w = brute_force_conjugate(&swap, &swap).unwrap().unwrap();
        assert!(w.bijection() == [0, 1] || w.bijection() == [1, 0]);

        let a = sys(&[0, 0, 1]);
        let b = sys(&[1, 1, 0]);
        let exhaustive = all_witnesses(&a, &b);
        let found = brute_force_conjugate(&a, &b).unwrap();
        assert_eq!(found.is_some(), !exhaustive.is_empty());
        // both are a 2-chain into a fixed point
        assert!(found.unwrap().intertwines(&a, &b));

        assert_eq!(
            brute_force_conjugate(&id2, &FiniteDynSys::identity(3).unwrap()),
            Ok(None)
        );
        let big = FiniteDynSys::identity(10).unwrap();
        assert_eq!(
            brute_force_conjugate(&big, &big),
            Err(Error::OracleTooLarge(10))
        );
    }

    #[test]
    fn witness_validation() {
        let a = sys(&[1, 0, 2]);
        assert!(ConjugacyWitness::new(vec![0, 0, 1], &a, &a).is_err());
        assert!(ConjugacyWitness::new(vec![0, 2, 1], &a, &a).is_err());
        assert!(ConjugacyWitness::new(vec![1, 0, 2], &a, &a).is_ok());
        assert!(ConjugacyWitness::new(vec![0, 1], &a, &a).is_err());
    }

    #[test]
    fn exhaustive_agreement_n4() {
        // every pair of self-maps of a 4-point set
        let maps: Vec<FiniteDynSys> = (0..4)
            .map(|_| 0..4usize)
            .multi_cartesian_product()
            .map(|m| FiniteDynSys::new(m).unwrap())
            .collect();
        let forms: Vec<String> = maps.iter().map(canonical_form).collect();
        for (i, a) in maps.iter().enumerate().step_by(7) {
            for (j, b) in maps.iter().enumerate() {
                let brute = brute_force_conjugate(a, b).unwrap();
                assert_eq!(brute.is_some(), forms[i] == forms[j], "{a} vs {b}");
                match are_conjugate(a, b) {
                    Some(w) => {
                        assert!(brute.is_some());
                        assert!(w.intertwines(a, b));
                    }
                    None => assert!(brute.is_none()),
                }
            }
        }
    }
}
