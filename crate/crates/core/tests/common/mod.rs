#![allow(dead_code)]

use std::collections::BTreeSet;

use strata_core::bubble_tree::BubbleTree;

/// Structural normal form built independently of the string encoding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Shape(u64, Vec<Shape>);

fn shape(weights: &[u64], children: &[Vec<usize>], v: usize) -> Shape {
    let mut kids: Vec<Shape> = children[v].iter().map(|&c| shape(weights, children, c)).collect();
    kids.sort();
    Shape(weights[v], kids)
}

fn subtree_total(weights: &[u64], children: &[Vec<usize>], v: usize) -> u64 {
    weights[v] + children[v].iter().map(|&c| subtree_total(weights, children, c)).sum::<u64>()
}

/// The two bullets of the definition, checked literally.
pub fn oracle_valid(weights: &[u64], children: &[Vec<usize>]) -> bool {
    (1..weights.len()).all(|v| {
        weights[v] != 0
            || (children[v].len() >= 2
                && children[v].iter().all(|&c| subtree_total(weights, children, c) > 0))
    })
}

fn compositions(total: u64, parts: usize, out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>) {
    if cur.len() == parts - 1 {
        cur.push(total);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for w in 0..=total {
        cur.push(w);
        compositions(total - w, parts, out, cur);
        cur.pop();
    }
}

/// Every rooted tree on at most `2k` labelled vertices (parents precede
/// children), every weighting with total `k`, filtered by the definition and
/// collapsed by structural shape.
pub fn oracle_classes(k: u64) -> BTreeSet<Shape> {
    let mut classes = BTreeSet::new();
    for n in 1..=(2 * k as usize) {
        let mut weightings = Vec::new();
        compositions(k, n, &mut weightings, &mut Vec::new());
        let mut parents = vec![0usize; n];
        loop {
            let mut children = vec![Vec::new(); n];
            for v in 1..n {
                children[parents[v]].push(v);
            }
            for w in &weightings {
                if oracle_valid(w, &children) {
                    classes.insert(shape(w, &children, 0));
                }
            }
            // next parent array with parents[v] < v
            let mut v = n;
            loop {
                if v <= 1 {
                    break;
                }
                v -= 1;
                parents[v] += 1;
                if parents[v] < v {
                    break;
                }
                parents[v] = 0;
                if v == 1 {
                    v = 0;
                }
            }
            if v == 0 || n == 1 {
                break;
            }
        }
    }
    classes
}

pub fn to_tree(s: &Shape) -> BubbleTree {
    fn walk(s: &Shape, parent: Option<usize>, w: &mut Vec<u64>, p: &mut Vec<Option<usize>>) {
        let id = w.len();
        w.push(s.0);
        p.push(parent);
        for c in &s.1 {
            walk(c, Some(id), w, p);
        }
    }
    let (mut w, mut p) = (Vec::new(), Vec::new());
    walk(s, None, &mut w, &mut p);
    BubbleTree::from_parents(w, p).unwrap()
}


/// Single-level admissibility by scanning `[0, 2p)^2` for witnesses.
pub fn oracle_single(p: i64, q: i64, k: i64, m: i64, mp: i64) -> bool {
    let n = 2 * p;
    (0..n).any(|a| {
        (0..n).any(|b| {
            (2 * a * q - (mp + m)).rem_euclid(n) == 0
                && (2 * b - (mp - m)).rem_euclid(n) == 0
                && (a * b - k).rem_euclid(p) == 0
        })
    })
}

fn ordered_compositions(k: i64) -> Vec<Vec<i64>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=k {
        for mut rest in ordered_compositions(k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Length of the shortest chain from `m` to `mp`, trying every ordered
/// composition of `k` and every sequence of intermediate weights.
pub fn oracle_chain(p: i64, q: i64, k: i64, m: i64, mp: i64) -> Option<usize> {
    let n = 2 * p;
    let mut best: Option<usize> = None;
    for comp in ordered_compositions(k) {
        let len = comp.len();
        let mids = len - 1;
        let total = (n as usize).pow(mids as u32);
        for code in 0..total {
            let mut ws = vec![m];
            let mut c = code;
            for _ in 0..mids {
                ws.push((c % n as usize) as i64);
                c /= n as usize;
            }
            ws.push(mp);
            if (0..len).all(|i| oracle_single(p, q, comp[i], ws[i], ws[i + 1])) {
                best = Some(best.map_or(len, |b| b.min(len)));
                break;
            }
        }
    }
    best
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}
