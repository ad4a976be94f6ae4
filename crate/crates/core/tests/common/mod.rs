//! Seeded random states and a small dense reference implementation that
//! shares no code with the library's linear algebra.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ssr_ent::fock::RANK_TOL;
use ssr_ent::{BasisLabel, ChargeRule, ModeLayout, PureState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn amp(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn local_labels(modes: usize, max_occ: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..modes {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max_occ).map(move |n| {
                    let mut w = v.clone();
                    w.push(n);
                    w
                })
            })
            .collect();
    }
    out
}

/// A random normalized state with up to two modes per party, occupations
/// up to 2 and at most 8 labels. Not necessarily entangled.
pub fn random_state(rng: &mut ChaCha8Rng) -> PureState {
    let (a, b) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let (la, lb) = (local_labels(a, 2), local_labels(b, 2));
    let size = rng.gen_range(1..=8);
    let mut labels = BTreeSet::new();
    while labels.len() < size {
        labels.insert(BasisLabel::new(
            la.choose(rng).unwrap().clone(),
            lb.choose(rng).unwrap().clone(),
        ));
    }
    let terms: Vec<_> = labels.into_iter().map(|l| (amp(rng), l)).collect();
    PureState::make_ket(ModeLayout::new(a, b).unwrap(), terms)
        .unwrap()
        .normalized()
        .unwrap()
}

pub fn random_entangled(rng: &mut ChaCha8Rng) -> PureState {
    loop {
        let s = random_state(rng);
        if !s.is_product(RANK_TOL).unwrap() {
            return s;
        }
    }
}

/// A random entangled state whose charge-sector blocks are all products,
/// so it is not 1-distillable under `rule`.
pub fn random_bound(rng: &mut ChaCha8Rng, rule: ChargeRule) -> PureState {
    loop {
        let (a, b) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let group = |modes| {
            let mut m: BTreeMap<u32, Vec<Vec<u32>>> = BTreeMap::new();
            for l in local_labels(modes, 2) {
                m.entry(rule.charge(&l)).or_default().push(l);
            }
            m
        };
        let (ga, gb) = (group(a), group(b));
        let ka: Vec<u32> = ga.keys().copied().collect();
        let kb: Vec<u32> = gb.keys().copied().collect();
        let mut sectors = BTreeSet::new();
        let count = rng.gen_range(2..=3);
        while sectors.len() < count {
            sectors.insert((*ka.choose(rng).unwrap(), *kb.choose(rng).unwrap()));
        }
        let mut terms = Vec::new();
        for (qa, qb) in sectors {
            let pick = |rng: &mut ChaCha8Rng, labels: &Vec<Vec<u32>>| {
                let k = rng.gen_range(1..=labels.len().min(2));
                let chosen: Vec<Vec<u32>> = labels.choose_multiple(rng, k).cloned().collect();
                chosen.into_iter().map(|l| (l, amp(rng))).collect::<Vec<_>>()
            };
            let va = pick(rng, &ga[&qa]);
            let vb = pick(rng, &gb[&qb]);
            for (x, ax) in &va {
                for (y, by) in &vb {
                    terms.push((ax * by, BasisLabel::new(x.clone(), y.clone())));
                }
            }
        }
        let s = PureState::make_ket(ModeLayout::new(a, b).unwrap(), terms).unwrap();
        if s.len() <= 8 && !s.is_product(RANK_TOL).unwrap() {
            return s.normalized().unwrap();
        }
    }
}

/// Rank by Gaussian elimination with partial pivoting, relative to the
/// largest entry.
pub fn gauss_rank(mut m: Vec<Vec<Complex64>>, rel_tol: f64) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let scale = m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).max_by(|&i, &j| m[i][c].norm().total_cmp(&m[j][c].norm())) else {
            break;
        };
        if m[p][c].norm() <= rel_tol * scale {
            continue;
        }
        m.swap(rank, p);
        for i in rank + 1..rows {
            let f = m[i][c] / m[rank][c];
            let pivot = m[rank].clone();
            for (x, v) in m[i][c..].iter_mut().zip(&pivot[c..]) {
                *x -= f * v;
            }
        }
        rank += 1;
    }
    rank
}

/// Coefficient matrix over the support sub-labels, built directly.
pub fn coefficients(psi: &PureState) -> Vec<Vec<Complex64>> {
    let rows: Vec<Vec<u32>> = psi
        .iter()
        .map(|(l, _)| l.alice().to_vec())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let cols: Vec<Vec<u32>> = psi
        .iter()
        .map(|(l, _)| l.bob().to_vec())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut m = vec![vec![Complex64::default(); cols.len()]; rows.len()];
    for (l, a) in psi.iter() {
        let i = rows.iter().position(|r| r == l.alice()).unwrap();
        let j = cols.iter().position(|c| c == l.bob()).unwrap();
        m[i][j] = *a;
    }
    m
}

/// Tensor power built by hand from label/amplitude lists.
pub fn brute_tensor_power(psi: &PureState, n: usize) -> Vec<(Vec<u32>, Vec<u32>, Complex64)> {
    let base: Vec<(Vec<u32>, Vec<u32>, Complex64)> = psi
        .iter()
        .map(|(l, a)| (l.alice().to_vec(), l.bob().to_vec(), *a))
        .collect();
    let mut acc = vec![(vec![], vec![], Complex64::new(1.0, 0.0))];
    for _ in 0..n {
        let mut next = Vec::new();
        for (x, y, a) in &acc {
            for (u, v, b) in &base {
                next.push(([x.clone(), u.clone()].concat(), [y.clone(), v.clone()].concat(), a * b));
            }
        }
        acc = next;
    }
    acc
}

/// Whether some sector block of the `n`-fold tensor power has rank above 1,
/// with ranks from Gaussian elimination and charges summed directly.
pub fn brute_n_distillable(psi: &PureState, n: usize, modulus: Option<u32>) -> bool {
    let charge = |occ: &[u32]| {
        let s: u32 = occ.iter().sum();
        modulus.map_or(s, |d| s % d)
    };
    type Block = BTreeMap<(Vec<u32>, Vec<u32>), Complex64>;
    let mut blocks: BTreeMap<(u32, u32), Block> = BTreeMap::new();
    for (x, y, a) in brute_tensor_power(psi, n) {
        *blocks
            .entry((charge(&x), charge(&y)))
            .or_default()
            .entry((x, y))
            .or_default() += a;
    }
    blocks.values().any(|block| {
        let rows: BTreeSet<&Vec<u32>> = block.keys().map(|(x, _)| x).collect();
        let cols: BTreeSet<&Vec<u32>> = block.keys().map(|(_, y)| y).collect();
        let rows: Vec<_> = rows.into_iter().collect();
        let cols: Vec<_> = cols.into_iter().collect();
        let mut m = vec![vec![Complex64::default(); cols.len()]; rows.len()];
        for ((x, y), a) in block {
            let i = rows.iter().position(|r| *r == x).unwrap();
            let j = cols.iter().position(|c| *c == y).unwrap();
            m[i][j] = *a;
        }
        gauss_rank(m, 1e-9) > 1
    })
}

/// Smallest eigenvalue of the partial transpose of a pure 2x2-qubit state
/// `sum c_ij |i>|j>`: minus the product of its two Schmidt coefficients.
pub fn pure_2x2_min_pt(c: [[Complex64; 2]; 2]) -> f64 {
    -(c[0][0] * c[1][1] - c[0][1] * c[1][0]).norm()
}

/// Expressions covering every production of the state grammar.
pub const CORPUS: &[&str] = &[
    "|0;0>",
    "|0;1>",
    "|1;0> + |0;1>",
    "1/sqrt2 |0;1> + 1/sqrt2 |1;0>",
    "|0,1;1,0> + |1,0;0,1>",
    "-|0;1> + |1;0>",
    "+|0;1> - |1;0>",
    "2 |0;0> + 3 |1;1>",
    "1/2 |0;0> + 1/2 |0;1> + 1/2 |1;0> + 1/2 |1;1>",
    "3/4/sqrt2 |0;1> - 1/3 |2;0>",
    "0.6 |0;1> + 0.8 |1;0>",
    ".5 |0;0> - .25 |1;1>",
    "1e-3 |0;0> + 1.5E2 |2;2>",
    "2.5e-1 |0;1> + 7.5e+0 |1;0>",
    "0.5i |0;1> + 0.5 |1;0>",
    "1/sqrt3i |0;0> - 2i |1;1> + |2;2>",
    "2 * |0;1> + 3*|1;0>",
    "|0;1> * |1;0>",
    "|0;1> x |1;0>",
    "|0;1> x |1;0> x |0;0>",
    "(|0;1> + |1;0>)",
    "((|0;1>) + (|1;0>))",
    "1/sqrt2 (|0;1> + |1;0>)",
    "(|0;1> + |1;0>) x (|0;0> + |0;1> + |1;0> + |1;1>)",
    "(|0;0> + |1;1>) * (|0;1> - 0.5i |1;0>)",
    "-(|0;1> - |1;0>) x |0;0>",
    "|0,1;0> + |0,1;1> + |1,0;0> - |1,0;1>",
    "|0,1;0> + |1,0;1>",
    "|0,0;1,1> + |2,0;0,2> - 0.3 |1,1;1,1>",
    "1/sqrt5 |0,1,2;2,1,0> + 2/sqrt5 |2,1,0;0,1,2>",
    "|10;3> - |3;10>",
    "  |0 ; 1 >  +  | 1 ; 0 >  ",
    "|0;1>\n  + |1;0>",
    "|0;0> + |0;0> + |1;1>",
    "0.1 |0;0> + 0.2 |0;1> + 0.3 |0;2> + 0.4 |1;0> + 0.5 |1;1> + 0.6 |1;2> + 0.7 |2;0>",
    "(1/sqrt2 |0;0> + 1/sqrt2i |1;1>) x (0.6 |0;1> + 0.8i |1;0>)",
];

/// A random state needing three copies: two Alice labels and two Bob labels
/// of distinct charges with `c00 c11 = -c01 c10`.
pub fn random_three_copy(rng: &mut ChaCha8Rng) -> PureState {
    let (a, b) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let pair = |rng: &mut ChaCha8Rng, modes| loop {
        let labels = local_labels(modes, 2);
        let x = labels.choose(rng).unwrap().clone();
        let y = labels.choose(rng).unwrap().clone();
        if x.iter().sum::<u32>() != y.iter().sum::<u32>() {
            return (x, y);
        }
    };
    let (x1, x2) = pair(rng, a);
    let (y1, y2) = pair(rng, b);
    let (c00, c01, c10) = (amp(rng), amp(rng), amp(rng));
    let c11 = -c01 * c10 / c00;
    let terms = [
        (c00, BasisLabel::new(x1.clone(), y1.clone())),
        (c01, BasisLabel::new(x1, y2.clone())),
        (c10, BasisLabel::new(x2.clone(), y1)),
        (c11, BasisLabel::new(x2, y2)),
    ];
    PureState::make_ket(ModeLayout::new(a, b).unwrap(), terms)
        .unwrap()
        .normalized()
        .unwrap()
}
