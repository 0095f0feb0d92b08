//! Existence of `Z_p`-invariant instantons on `S^4`.
//!
//! The generator acts on `C^2` by `(z1, z2) -> (zeta z1, zeta^q z2)` and
//! lifts to the bundle; an invariant charge `k` instanton is labelled by a
//! triple `(k, m, m')` recording the isotropy weights at the two fixed points
//! (south pole `0`, north pole `infinity`), as residues mod `2p`.
//!
//! A triple is single-level admissible when the congruences
//!
//! ```text
//! 2 a q = m' + m   (mod 2p)
//! 2 b   = m' - m   (mod 2p)
//! a b   = k        (mod p)
//! ```
//!
//! have a solution. Invariant instantons exist exactly when `k` splits as
//! `k_1 + ... + k_n` into admissible links `(k_i, m_i, m'_i)` with
//! `m_1 = m`, `m'_i = m_{i+1}` and a terminal condition on `m'_n`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct S4Action {
    pub p: u64,
    pub q: i64,
}

impl S4Action {
    pub fn new(p: u64, q: i64) -> Result<Self> {
        if p == 0 {
            return Err(Error::validation("p must be positive"));
        }
        if (p as i64).gcd(&q) != 1 {
            return Err(Error::validation(format!("gcd(p, q) != 1 for p = {p}, q = {q}")));
        }
        Ok(S4Action { p, q })
    }

    pub fn modulus(&self) -> u64 {
        2 * self.p
    }

    fn q_mod(&self) -> u64 {
        self.q.rem_euclid(self.modulus() as i64) as u64
    }
}

/// `(k, m, m')` with both weights normalised into `[0, 2p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct S4Triple {
    pub k: u64,
    pub m: u64,
    pub m_prime: u64,
}

impl S4Triple {
    pub fn new(action: &S4Action, k: u64, m: i64, m_prime: i64) -> Self {
        let n = action.modulus() as i64;
        S4Triple { k, m: m.rem_euclid(n) as u64, m_prime: m_prime.rem_euclid(n) as u64 }
    }

    /// The triple of the standard invariant charge one instanton.
    pub fn instanton(action: &S4Action) -> Self {
        S4Triple::new(action, 1, action.q - 1, action.q + 1)
    }
}

/// Which weight the end of a chain has to match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalRule {
    /// `m'_n = m'`: the chain runs from `m` to `m'`.
    #[default]
    MatchesMPrime,
    /// `m'_n = m`, read literally; `m'` of the triple is then unused.
    Literal,
}

/// All `(a, b)` in `[0, 2p)^2` solving the two weight congruences.
pub fn congruence_witnesses(action: &S4Action, triple: &S4Triple) -> Vec<(u64, u64)> {
    let n = action.modulus();
    let (sum, diff) = weight_targets(n, triple.m, triple.m_prime);
    let a_set = solve_linear(n, 2 * action.q_mod() % n, sum);
    let b_set = solve_linear(n, 2, diff);
    a_set.iter().flat_map(|&a| b_set.iter().map(move |&b| (a, b))).collect()
}

fn weight_targets(n: u64, m: u64, m_prime: u64) -> (u64, u64) {
    ((m + m_prime) % n, (m_prime + n - m) % n)
}

/// `{x in [0, n) : c x = t mod n}` by scanning.
fn solve_linear(n: u64, c: u64, t: u64) -> Vec<u64> {
    (0..n).filter(|x| (c * x) % n == t).collect()
}

fn require_charge(triple: &S4Triple) -> Result<()> {
    if triple.k == 0 {
        Err(Error::PreconditionFailed("charge k must be at least 1".into()))
    } else {
        Ok(())
    }
}

pub fn single_level_admissible(action: &S4Action, triple: &S4Triple) -> Result<bool> {
    require_charge(triple)?;
    let p = action.p;
    Ok(congruence_witnesses(action, triple).iter().any(|(a, b)| (a * b) % p == triple.k % p))
}

/// `table[kappa][r][s]`: whether `(k, r, s)` is single-level admissible for
/// any `k = kappa mod p`.
struct LinkTable {
    p: u64,
    n: usize,
    table: Vec<Vec<Vec<bool>>>,
}

impl LinkTable {
    fn new(action: &S4Action) -> Self {
        let p = action.p;
        let n = action.modulus();
        let qq = 2 * action.q_mod() % n;
        let a_sets: Vec<Vec<u64>> = (0..n).map(|t| solve_linear(n, qq, t)).collect();
        let b_sets: Vec<Vec<u64>> = (0..n).map(|t| solve_linear(n, 2, t)).collect();
        let mut table = vec![vec![vec![false; n as usize]; n as usize]; p as usize];
        for r in 0..n {
            for s in 0..n {
                let (sum, diff) = weight_targets(n, r, s);
                for a in &a_sets[sum as usize] {
                    for b in &b_sets[diff as usize] {
                        table[((a * b) % p) as usize][r as usize][s as usize] = true;
                    }
                }
            }
        }
        LinkTable { p, n: n as usize, table }
    }

    fn admissible(&self, k: u64, r: usize, s: usize) -> bool {
        self.table[(k % self.p) as usize][r][s]
    }
}

/// Whether a chain of admissible links realises the triple.
pub fn exists_invariant(action: &S4Action, triple: &S4Triple) -> Result<bool> {
    exists_invariant_with(action, triple, TerminalRule::default())
}

pub fn exists_invariant_with(
    action: &S4Action,
    triple: &S4Triple,
    rule: TerminalRule,
) -> Result<bool> {
    Ok(find_chain_with(action, triple, rule)?.is_some())
}

/// A shortest witnessing chain, if one exists.
pub fn find_chain(action: &S4Action, triple: &S4Triple) -> Result<Option<Vec<S4Triple>>> {
    find_chain_with(action, triple, TerminalRule::default())
}

/// Breadth-first search over `(weight used, current residue)`; each layer
/// adds one link, so the first hit is a chain of minimal length.
pub fn find_chain_with(
    action: &S4Action,
    triple: &S4Triple,
    rule: TerminalRule,
) -> Result<Option<Vec<S4Triple>>> {
    require_charge(triple)?;
    let links = LinkTable::new(action);
    let n = links.n;
    let k = triple.k as usize;
    let target = match rule {
        TerminalRule::MatchesMPrime => triple.m_prime as usize,
        TerminalRule::Literal => triple.m as usize,
    };
    // prev[w][r] = (w0, r0) of the predecessor state
    let mut prev: Vec<Vec<Option<(usize, usize)>>> = vec![vec![None; n]; k + 1];
    let start = (0usize, triple.m as usize);
    let mut frontier = vec![start];
    let mut seen = vec![vec![false; n]; k + 1];
    seen[0][start.1] = true;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &(w, r) in &frontier {
            for kk in 1..=(k - w) {
                for s in 0..n {
                    if seen[w + kk][s] || !links.admissible(kk as u64, r, s) {
                        continue;
                    }
                    seen[w + kk][s] = true;
                    prev[w + kk][s] = Some((w, r));
                    next.push((w + kk, s));
                }
            }
        }
        if seen[k][target] {
            let mut chain = Vec::new();
            let (mut w, mut s) = (k, target);
            while let Some((w0, r0)) = prev[w][s] {
                chain.push(S4Triple { k: (w - w0) as u64, m: r0 as u64, m_prime: s as u64 });
                (w, s) = (w0, r0);
            }
            chain.reverse();
            return Ok(Some(chain));
        }
        frontier = next;
    }
    Ok(None)
}

/// Every triple `(k, m, m')` for which an invariant instanton exists.
pub fn admissible_triples(action: &S4Action, k: u64) -> Result<Vec<S4Triple>> {
    let n = action.modulus() as i64;
    let mut out = Vec::new();
    for m in 0..n {
        for mp in 0..n {
            let t = S4Triple::new(action, k, m, mp);
            if exists_invariant(action, &t)? {
                out.push(t);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instanton_witness() {
        for p in 2..=12u64 {
            for q in 1..p as i64 {
                let Ok(action) = S4Action::new(p, q) else { continue };
                let t = S4Triple::instanton(&action);
                assert!(congruence_witnesses(&action, &t).contains(&(1, 1)));
                assert!(single_level_admissible(&action, &t).unwrap());
            }
        }
    }

    #[test]
    fn parity_obstruction() {
        let action = S4Action::new(3, 1).unwrap();
        for k in 0..4 {
            assert!(congruence_witnesses(&action, &S4Triple::new(&action, k, 0, 1)).is_empty());
        }
        assert!(congruence_witnesses(&action, &S4Triple::new(&action, 1, 0, 0)).contains(&(0, 0)));
    }

    #[test]
    fn zero_charge_rejected() {
        let action = S4Action::new(3, 1).unwrap();
        let t = S4Triple::new(&action, 0, 0, 0);
        assert!(matches!(single_level_admissible(&action, &t), Err(Error::PreconditionFailed(_))));
        assert!(matches!(exists_invariant(&action, &t), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn chains_are_well_formed() {
        let action = S4Action::new(5, 2).unwrap();
        for k in 1..=3 {
            for t in admissible_triples(&action, k).unwrap() {
                let chain = find_chain(&action, &t).unwrap().unwrap();
                assert_eq!(chain.iter().map(|l| l.k).sum::<u64>(), k);
                assert_eq!(chain.first().unwrap().m, t.m);
                assert_eq!(chain.last().unwrap().m_prime, t.m_prime);
                for w in chain.windows(2) {
                    assert_eq!(w[0].m_prime, w[1].m);
                }
                for link in &chain {
                    assert!(single_level_admissible(&action, link).unwrap());
                }
            }
        }
    }

    #[test]
    fn trivial_group() {
        let action = S4Action::new(1, 1).unwrap();
        for k in 1..5 {
            assert!(exists_invariant(&action, &S4Triple::new(&action, k, 0, 0)).unwrap());
            assert!(exists_invariant(&action, &S4Triple::new(&action, k, 1, 1)).unwrap());
        }
    }

    #[test]
    fn action_validation() {
        assert!(S4Action::new(0, 1).is_err());
        assert!(S4Action::new(4, 2).is_err());
        assert_eq!(S4Triple::new(&S4Action::new(3, 1).unwrap(), 1, -1, 7).m, 5);
    }
}
