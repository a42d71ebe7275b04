//! A second, deliberately naive implementation of the survivor set for
//! c1 = (1,1,1). Nothing here calls the classifier.

use std::collections::BTreeSet;

/// Multidegree and genus.
pub type Comp = ([i64; 3], u32);

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn h0_twisted_canonical(c: &Comp) -> Option<u64> {
    // for c1 = (1,1,1) the twist (2,2,2) - c1 has degree deg C
    let t: i64 = c.0.iter().sum();
    let g = i64::from(c.1);
    match g {
        0 if t >= 2 => Some((t - 1) as u64),
        0 => None,
        1 if t == 1 => None,
        _ if t == 0 => Some(g as u64),
        _ => Some((g - 1 + t) as u64),
    }
}

fn component_ok(c: &Comp, rank_two: bool) -> bool {
    let (e, g) = (c.0, i64::from(c.1));
    let deg: i64 = e.iter().sum();
    if rank_two && 2 * g - 2 + deg != 0 {
        return false;
    }
    if h0_twisted_canonical(c).is_none() {
        return false;
    }
    if e.contains(&1) && g != 0 {
        return false;
    }
    for j in 0..3 {
        let (p, q) = (e[(j + 1) % 3], e[(j + 2) % 3]);
        // contracted by factor j: a curve of bidegree (p,q) on a quadric
        if e[j] == 0 && g != (p - 1) * (q - 1) {
            return false;
        }
        // every a_k = 1, so every complementary pair embeds the component
        if p + q < 1 || g != (p - 1) * (q - 1) {
            return false;
        }
    }
    true
}

fn tuple_ok(t: &[Comp]) -> bool {
    let mut total = [0i64; 3];
    for c in t {
        for (acc, x) in total.iter_mut().zip(c.0) {
            *acc += x;
        }
    }
    if total.iter().any(|&x| x > 2) {
        return false;
    }
    for j in 0..3 {
        let (p, q) = ((j + 1) % 3, (j + 2) % 3);
        if t.len() >= 2 {
            let all = |x, y| t.iter().all(|c| c.0[p] == x && c.0[q] == y);
            if !(all(0, 1) || all(1, 0)) {
                return false;
            }
        }
        for a in 0..t.len() {
            for b in a + 1..t.len() {
                if t[a].0[p] * t[b].0[q] + t[a].0[q] * t[b].0[p] != 0 {
                    return false;
                }
            }
        }
    }
    true
}

fn canonical(t: &[Comp]) -> Vec<Comp> {
    PERMS
        .iter()
        .map(|p| {
            let mut v: Vec<Comp> = t
                .iter()
                .map(|(e, g)| {
                    let mut out = [0; 3];
                    for i in 0..3 {
                        out[p[i]] = e[i];
                    }
                    (out, *g)
                })
                .collect();
            v.sort();
            v
        })
        .min()
        .unwrap()
}

/// Survivors with at most four components of total degree at most six, as
/// canonical sorted component lists.
pub fn survivors_111(rank_two: bool) -> BTreeSet<Vec<Comp>> {
    let mut pool = Vec::new();
    for e1 in 0..=6i64 {
        for e2 in 0..=6 - e1 {
            for e3 in 0..=6 - e1 - e2 {
                if e1 + e2 + e3 == 0 {
                    continue;
                }
                for g in 0..=10 {
                    let c = ([e1, e2, e3], g);
                    if component_ok(&c, rank_two) {
                        pool.push(c);
                    }
                }
            }
        }
    }
    let n = pool.len();
    let mut out = BTreeSet::new();
    let mut consider = |idx: &[usize]| {
        let t: Vec<Comp> = idx.iter().map(|&i| pool[i]).collect();
        let degree: i64 = t.iter().flat_map(|c| c.0).sum();
        if degree <= 6 && tuple_ok(&t) {
            out.insert(canonical(&t));
        }
    };
    for a in 0..n {
        consider(&[a]);
        for b in a..n {
            consider(&[a, b]);
            for c in b..n {
                consider(&[a, b, c]);
                for d in c..n {
                    consider(&[a, b, c, d]);
                }
            }
        }
    }
    out
}
