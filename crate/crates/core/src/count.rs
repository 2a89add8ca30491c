//! Slalom enumeration and four independent counts of d-term silting
//! collections for linearly oriented `A_n`.

use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::slalom::{ext_positive_some_direction, CrossArc, Surface, XPair, XPoint};

/// Limits on brute-force enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_slaloms: usize,
    pub max_collections: u64,
}

impl Default for Guard {
    fn default() -> Self {
        Self {
            max_slaloms: 60,
            max_collections: 1_000_000,
        }
    }
}

impl Guard {
    pub fn unlimited() -> Self {
        Self {
            max_slaloms: usize::MAX,
            max_collections: u64::MAX,
        }
    }

    pub fn check(&self, n: usize, d: usize) -> Result<()> {
        let slaloms = census_size(n, d);
        let expected = fuss_catalan(n, d);
        let within = slaloms <= self.max_slaloms
            && expected.to_u64().is_some_and(|e| e <= self.max_collections);
        if within {
            Ok(())
        } else {
            Err(Error::SizeLimit {
                n,
                d,
                slaloms,
                expected: expected.to_string(),
            })
        }
    }
}

/// `d*n + (d-1)*n*(n-1)/2`.
pub fn census_size(n: usize, d: usize) -> usize {
    d * n + (d - 1) * n * n.saturating_sub(1) / 2
}

/// Slaloms of the two closed shapes `(0,t)-(s,t)` and `(s1,t)-(s2,t+1)`,
/// canonically oriented and sorted.
pub fn census_slaloms(n: usize, d: usize) -> Vec<XPair> {
    let low = 1 - d as i64;
    let mut out = Vec::with_capacity(census_size(n, d));
    for t in low..=0 {
        for s in 1..=n {
            out.push(XPair::new(XPoint::new(0, t), XPoint::new(s, t)));
        }
        if t < 0 {
            for s1 in 1..=n {
                for s2 in s1 + 1..=n {
                    out.push(XPair::new(XPoint::new(s1, t), XPoint::new(s2, t + 1)));
                }
            }
        }
    }
    out.sort();
    out
}

/// All slaloms of the `d`-term fan model, canonically sorted.
///
/// Every ×-pair is tested; the result must match the closed-shape census.
pub fn enumerate_slaloms_an(n: usize, d: usize) -> Result<Vec<XPair>> {
    let surface = Surface::linear_an(n, d)?;
    let found = slaloms_of(&surface, d)?;
    let expected = census_slaloms(n, d);
    if found != expected {
        return Err(Error::ModelInconsistency(format!(
            "found {} slaloms for n={n}, d={d}, census predicts {}",
            found.len(),
            expected.len()
        )));
    }
    Ok(found)
}

/// Slaloms of any finite-window surface whose grading stays in `[-d+1, 0]`,
/// canonically oriented and sorted.
pub fn slaloms_of(surface: &Surface, d: usize) -> Result<Vec<XPair>> {
    let points = surface
        .refined()
        .x_points()
        .ok_or_else(|| Error::Precondition("slalom enumeration needs a finite window".into()))?;
    let mut found = Vec::new();
    for (i, &s) in points.iter().enumerate() {
        for &t in &points[i + 1..] {
            let arc = match CrossArc::new(surface, XPair::new(s, t)) {
                Ok(arc) => arc,
                Err(Error::DegenerateArc(_)) => continue,
                Err(e) => return Err(e),
            };
            if arc.is_slalom() && arc.in_window(d) {
                found.push(arc.pair);
            }
        }
    }
    Ok(found)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiltingCollection {
    pub n: usize,
    pub d: usize,
    pub slaloms: Vec<XPair>,
}

impl std::fmt::Display for SiltingCollection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, s) in self.slaloms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Slaloms of the fan model with their pairwise conflict relation.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    pub n: usize,
    pub d: usize,
    pub slaloms: Vec<XPair>,
    conflicts: Vec<FixedBitSet>,
}

impl ConflictGraph {
    pub fn build(n: usize, d: usize) -> Result<Self> {
        let slaloms = enumerate_slaloms_an(n, d)?;
        let surface = Surface::linear_an(n, d)?;
        let arcs = slaloms
            .iter()
            .map(|&p| CrossArc::new(&surface, p))
            .collect::<Result<Vec<_>>>()?;
        let k = slaloms.len();
        let mut conflicts = vec![FixedBitSet::with_capacity(k); k];
        for i in 0..k {
            for j in i + 1..k {
                if ext_positive_some_direction(&arcs[i], &arcs[j])? {
                    conflicts[i].insert(j);
                    conflicts[j].insert(i);
                }
            }
        }
        Ok(Self {
            n,
            d,
            slaloms,
            conflicts,
        })
    }

    pub fn conflict(&self, i: usize, j: usize) -> bool {
        self.conflicts[i].contains(j)
    }

    /// Calls `emit` on every conflict-free index set of size `size` whose
    /// smallest element is `first`, in lexicographic order.
    fn search_from<F: FnMut(&[usize])>(&self, size: usize, first: usize, emit: &mut F) {
        let k = self.slaloms.len();
        let mut allowed = FixedBitSet::with_capacity(k);
        allowed.insert_range(first + 1..k);
        allowed.difference_with(&self.conflicts[first]);
        let mut chosen = vec![first];
        self.extend(size, &mut chosen, &allowed, emit);
    }

    fn extend<F: FnMut(&[usize])>(
        &self,
        size: usize,
        chosen: &mut Vec<usize>,
        allowed: &FixedBitSet,
        emit: &mut F,
    ) {
        let need = size - chosen.len();
        if need == 0 {
            emit(chosen);
            return;
        }
        if allowed.count_ones(..) < need {
            return;
        }
        for j in allowed.ones() {
            if allowed.count_ones(j..) < need {
                break;
            }
            let mut next = allowed.clone();
            next.set_range(..j + 1, false);
            next.difference_with(&self.conflicts[j]);
            chosen.push(j);
            self.extend(size, chosen, &next, emit);
            chosen.pop();
        }
    }

    /// All conflict-free index sets of size `size`, in lexicographic order.
    pub fn independent_sets(&self, size: usize) -> Vec<Vec<usize>> {
        if size == 0 {
            return vec![Vec::new()];
        }
        (0..self.slaloms.len())
            .into_par_iter()
            .map(|first| {
                let mut found = Vec::new();
                self.search_from(size, first, &mut |set| found.push(set.to_vec()));
                found
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }

    pub fn count_independent_sets(&self, size: usize) -> u64 {
        if size == 0 {
            return 1;
        }
        (0..self.slaloms.len())
            .into_par_iter()
            .map(|first| {
                let mut found = 0u64;
                self.search_from(size, first, &mut |_| found += 1);
                found
            })
            .sum()
    }

    /// True iff every slalom outside `set` conflicts with some member.
    pub fn is_maximal(&self, set: &[usize]) -> bool {
        (0..self.slaloms.len())
            .filter(|i| !set.contains(i))
            .all(|i| set.iter().any(|&j| self.conflict(i, j)))
    }
}

/// Every d-term silting collection of the fan model, in canonical order.
pub fn enumerate_silting_an(n: usize, d: usize, guard: &Guard) -> Result<Vec<SiltingCollection>> {
    guard.check(n, d)?;
    let graph = ConflictGraph::build(n, d)?;
    let sets = graph.independent_sets(n);
    sets.into_iter()
        .map(|set| {
            if !graph.is_maximal(&set) {
                return Err(Error::Internal(format!(
                    "collection {set:?} is not maximal"
                )));
            }
            Ok(SiltingCollection {
                n,
                d,
                slaloms: set.into_iter().map(|i| graph.slaloms[i]).collect(),
            })
        })
        .collect()
}

/// Brute-force count without materializing the collections.
pub fn count_silting_brute_force(n: usize, d: usize, guard: &Guard) -> Result<BigUint> {
    guard.check(n, d)?;
    let graph = ConflictGraph::build(n, d)?;
    Ok(BigUint::from(graph.count_independent_sets(n)))
}

/// Weights for the recursion: either the literal double sum or its
/// closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weights {
    /// `sum_{m=k}^{d-1} C(m, k)`
    Nested,
    /// `C(d, k+1)`
    HockeyStick,
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        BigUint::zero()
    } else {
        num_integer::binomial(BigUint::from(n), BigUint::from(k))
    }
}

pub fn recursion_weight(d: usize, k: usize, weights: Weights) -> BigUint {
    match weights {
        Weights::Nested => (k..d).map(|m| binomial(m, k)).sum(),
        Weights::HockeyStick => binomial(d, k + 1),
    }
}

/// `B_0..=B_n` from the recursion over increasing index chains.
pub fn recursion_table(n: usize, d: usize, weights: Weights) -> Vec<BigUint> {
    assert!(d >= 1, "d must be positive");
    let mut b: Vec<BigUint> = vec![BigUint::one()];
    if n >= 1 {
        b.push(BigUint::from(d));
    }
    let w: Vec<BigUint> = (0..d).map(|k| recursion_weight(d, k, weights)).collect();
    for top in 2..=n {
        // g[j]: chains of the current length ending at j, product so far
        let mut g: Vec<BigUint> = (0..=top)
            .map(|j| {
                if j >= 2 {
                    b[j - 2].clone()
                } else {
                    BigUint::zero()
                }
            })
            .collect();
        let mut total = &w[0] * &b[top - 1];
        for wk in w.iter().skip(1) {
            let s: BigUint = (2..=top).map(|j| &g[j] * &b[top - j]).sum();
            if s.is_zero() {
                break;
            }
            total += wk * s;
            let next: Vec<BigUint> = (0..=top)
                .map(|j| (2..j).map(|i| &g[i] * &b[j - i - 1]).sum())
                .collect();
            g = next;
        }
        b.push(total);
    }
    b
}

pub fn count_recursive(n: usize, d: usize) -> BigUint {
    recursion_table(n, d, Weights::Nested)
        .pop()
        .expect("table is nonempty")
}

/// `C(d(n+1), n+1) / ((d-1)(n+1) + 1)`.
pub fn fuss_catalan(n: usize, d: usize) -> BigUint {
    let top = binomial(d * (n + 1), n + 1);
    let (q, r) = top.div_rem(&BigUint::from((d - 1) * (n + 1) + 1));
    debug_assert!(r.is_zero());
    q
}

/// Complete ordered `d`-ary trees with `m` internal nodes:
/// `t_0 = 1`, `t_m = [x^(m-1)] T(x)^d`.
pub fn count_trees(m: usize, d: usize) -> BigUint {
    // powers[j][i] = [x^i] T(x)^(j+1), filled as t grows
    let mut t: Vec<BigUint> = vec![BigUint::one()];
    let mut powers: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]; d];
    for i in 1..=m {
        let ti = powers[d - 1][i - 1].clone();
        t.push(ti);
        for j in 0..d {
            let c = if j == 0 {
                t[i].clone()
            } else {
                (0..=i).map(|k| &powers[j - 1][k] * &t[i - k]).sum()
            };
            powers[j].push(c);
        }
    }
    t.swap_remove(m)
}

fn as_number<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde_json::Number::from_str(&x.to_string())
        .map_err(serde::ser::Error::custom)?
        .serialize(s)
}

fn as_optional_number<S: Serializer>(
    x: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => as_number(x, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Methods {
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "as_optional_number"
    )]
    pub brute_force: Option<BigUint>,
    #[serde(serialize_with = "as_number")]
    pub recursion: BigUint,
    #[serde(serialize_with = "as_number")]
    pub closed_form: BigUint,
    #[serde(serialize_with = "as_number")]
    pub tree_dp: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub n: usize,
    pub d: usize,
    pub methods: Methods,
    pub agree: bool,
}

/// Computes every enabled method and whether they agree.
pub fn verify(n: usize, d: usize, with_brute_force: bool, guard: &Guard) -> Result<CountReport> {
    if d == 0 {
        return Err(Error::Precondition("d must be at least 1".into()));
    }
    let brute_force = if with_brute_force {
        Some(count_silting_brute_force(n, d, guard)?)
    } else {
        None
    };
    let methods = Methods {
        brute_force,
        recursion: count_recursive(n, d),
        closed_form: fuss_catalan(n, d),
        tree_dp: count_trees(n + 1, d),
    };
    let reference = &methods.recursion;
    let agree = &methods.closed_form == reference
        && &methods.tree_dp == reference
        && methods.brute_force.as_ref().is_none_or(|b| b == reference);
    Ok(CountReport {
        n,
        d,
        methods,
        agree,
    })
}
