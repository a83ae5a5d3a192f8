//! Double description method for pointed cones.
//!
//! Computes the extreme rays of `{ y : A y >= 0 }` restricted to the row
//! space of `A`; the orthogonal complement (the lineality space, `A y = 0`)
//! is returned separately as a basis.

use crate::linalg::{dot, inverse, nullspace, rref};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct ConeGenerators<T> {
    pub rays: Vec<Vec<T>>,
    pub lineality: Vec<Vec<T>>,
}

/// Zero sets as bitsets over constraint indices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(m: usize) -> Self {
        Self(vec![0; m.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Generator<T> {
    ray: Vec<T>,
    zeros: ZeroSet,
}

/// Constraints are processed in the order given; callers fix that order
/// for reproducible intermediate results.
pub fn extreme_rays<T: Scalar>(constraints: &[Vec<T>], dim: usize) -> ConeGenerators<T> {
    let lineality = nullspace(constraints, dim);
    let m = constraints.len();

    // Greedy basis of independent rows, in input order.
    let mut basis: Vec<usize> = Vec::new();
    let mut echelon: Vec<Vec<T>> = Vec::new();
    for (i, row) in constraints.iter().enumerate() {
        let mut trial = echelon.clone();
        trial.push(row.clone());
        if rref(&mut trial).len() > echelon.len() {
            echelon = trial;
            basis.push(i);
        }
    }
    let r = basis.len();
    if r == 0 {
        return ConeGenerators { rays: Vec::new(), lineality };
    }

    // Initial simplicial cone: rays y_k in the row space with A_K y_k = e_k.
    let a_k: Vec<Vec<T>> = basis.iter().map(|&i| constraints[i].clone()).collect();
    let gram: Vec<Vec<T>> = a_k.iter().map(|x| a_k.iter().map(|y| dot(x, y)).collect()).collect();
    let gram_inv = inverse(&gram).expect("basis rows are independent");
    let mut processed = vec![false; m];
    basis.iter().for_each(|&i| processed[i] = true);
    let mut gens: Vec<Generator<T>> = (0..r)
        .map(|k| {
            let mut ray = vec![T::zero(); dim];
            for (j, row) in a_k.iter().enumerate() {
                let w = gram_inv[j][k].clone();
                for (slot, x) in ray.iter_mut().zip(row) {
                    *slot = slot.clone() + w.clone() * x.clone();
                }
            }
            T::normalize_direction(&mut ray);
            let mut zeros = ZeroSet::new(m);
            for (j, &row) in basis.iter().enumerate() {
                if j != k {
                    zeros.insert(row);
                }
            }
            Generator { ray, zeros }
        })
        .collect();

    for j in 0..m {
        if processed[j] {
            continue;
        }
        let row = &constraints[j];
        let signs: Vec<(T, i8)> = gens
            .iter()
            .map(|g| {
                let s = dot(row, &g.ray);
                let sign = s.sign();
                (s, sign)
            })
            .collect();

        let mut next: Vec<Generator<T>> = Vec::new();
        for (g, (_, sign)) in gens.iter().zip(&signs) {
            if *sign >= 0 {
                let mut zeros = g.zeros.clone();
                if *sign == 0 {
                    zeros.insert(j);
                }
                next.push(Generator { ray: g.ray.clone(), zeros });
            }
        }
        for (p, (sp, sign_p)) in signs.iter().enumerate() {
            if *sign_p <= 0 {
                continue;
            }
            for (n, (sn, sign_n)) in signs.iter().enumerate() {
                if *sign_n >= 0 {
                    continue;
                }
                let common = gens[p].zeros.intersect(&gens[n].zeros);
                if r >= 2 && common.len() < r - 2 {
                    continue;
                }
                let adjacent = gens.iter().enumerate().all(|(t, g)| t == p || t == n || !common.is_subset(&g.zeros));
                if !adjacent {
                    continue;
                }
                // sp > 0 > sn, so this is a positive combination on the hyperplane.
                let mut ray: Vec<T> = gens[n]
                    .ray
                    .iter()
                    .zip(&gens[p].ray)
                    .map(|(yn, yp)| sp.clone() * yn.clone() - sn.clone() * yp.clone())
                    .collect();
                T::normalize_direction(&mut ray);
                let mut zeros = common;
                zeros.insert(j);
                next.push(Generator { ray, zeros });
            }
        }
        gens = next;
        processed[j] = true;
    }

    ConeGenerators { rays: gens.into_iter().map(|g| g.ray).collect(), lineality }
}
