//! Small finite abelian groups and their automorphisms, for sweeps.

use std::collections::HashSet;

use crate::etale::EtaleGroupModel;
use crate::fgab::FgAbGroup;
use crate::intlat::IntMatrix;

/// Every abelian group of order `n` in invariant-factor form.
pub fn abelian_groups(n: u64) -> Vec<FgAbGroup> {
    // chains d_1 | d_2 | ... | d_k with d_1 > 1, built from the largest factor down
    fn go(rest: u64, multiple_of: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            let mut f = acc.clone();
            f.reverse();
            out.push(f);
            return;
        }
        // next (smaller) factor d must divide the previous one and rest
        for d in 2..=rest {
            if rest % d == 0 && multiple_of % d == 0 {
                let rem = rest / d;
                // remaining factors all divide d, so rem must be a product of divisors of d
                if rem == 1 || divides_power(rem, d) {
                    acc.push(d);
                    go(rem, d, acc, out);
                    acc.pop();
                }
            }
        }
    }
    if n == 1 {
        return vec![FgAbGroup::trivial()];
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    let mut seen = HashSet::new();
    out.into_iter()
        .filter(|f| seen.insert(f.clone()))
        .map(|f| FgAbGroup::new(f).expect("divisibility chain"))
        .collect()
}

fn divides_power(m: u64, d: u64) -> bool {
    let mut r = m;
    loop {
        let g = num_integer::gcd(r, d);
        if g == 1 {
            return r == 1;
        }
        r /= g;
    }
}

/// All groups of order at most `n`, trivial group first.
pub fn abelian_groups_up_to(n: u64) -> Vec<FgAbGroup> {
    (1..=n).flat_map(abelian_groups).collect()
}

/// Endomorphism matrices: column `j` is the image of generator `j`.
pub fn endomorphisms(g: &FgAbGroup) -> Vec<IntMatrix> {
    endomorphism_columns(g)
        .into_iter()
        .map(|cols| columns_to_matrix(g, &cols))
        .collect()
}

fn columns_to_matrix(g: &FgAbGroup, cols: &[Vec<i64>]) -> IntMatrix {
    let r = g.rank();
    IntMatrix::from_fn(r, r, |i, j| cols[j][i].into())
}

/// Images of the generators for every endomorphism. A generator of order
/// `d` may go to any element killed by `d`.
fn endomorphism_columns(g: &FgAbGroup) -> Vec<Vec<Vec<i64>>> {
    let els = g.elements();
    let choices: Vec<Vec<&Vec<i64>>> = g
        .factors()
        .iter()
        .map(|&d| els.iter().filter(|x| g.is_zero(&g.scale(d as i64, x))).collect())
        .collect();
    let r = g.rank();
    let mut out = Vec::new();
    let mut idx = vec![0usize; r];
    loop {
        out.push((0..r).map(|j| choices[j][idx[j]].clone()).collect());
        let mut k = 0;
        loop {
            if k == r {
                return out;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Automorphisms with the permutation each induces on `g.elements()`.
fn automorphisms_with_permutations(g: &FgAbGroup) -> Vec<(IntMatrix, Vec<u32>)> {
    let els = g.elements();
    let mut seen = vec![false; els.len()];
    endomorphism_columns(g)
        .into_iter()
        .filter_map(|cols| {
            seen.iter_mut().for_each(|s| *s = false);
            let mut perm = Vec::with_capacity(els.len());
            for x in &els {
                let y = x
                    .iter()
                    .zip(&cols)
                    .fold(g.zero(), |acc, (&k, c)| g.add(&acc, &g.scale(k, c)));
                let i = g.index_of(&y);
                if std::mem::replace(&mut seen[i], true) {
                    return None;
                }
                perm.push(i as u32);
            }
            Some((columns_to_matrix(g, &cols), perm))
        })
        .collect()
}

pub fn automorphisms(g: &FgAbGroup) -> Vec<IntMatrix> {
    automorphisms_with_permutations(g)
        .into_iter()
        .map(|(m, _)| m)
        .collect()
}

/// One automorphism per conjugacy class in `Aut(g)`.
pub fn automorphism_class_representatives(g: &FgAbGroup) -> Vec<IntMatrix> {
    let auts = automorphisms_with_permutations(g);
    let inverse = |p: &[u32]| {
        let mut q = vec![0u32; p.len()];
        for (i, &j) in p.iter().enumerate() {
            q[j as usize] = i as u32;
        }
        q
    };
    let inverses: Vec<Vec<u32>> = auts.iter().map(|(_, p)| inverse(p)).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut reps = Vec::new();
    for (m, f) in &auts {
        if seen.contains(f) {
            continue;
        }
        reps.push(m.clone());
        for ((_, u), ui) in auts.iter().zip(&inverses) {
            // u ∘ f ∘ u⁻¹
            seen.insert(ui.iter().map(|&x| u[f[x as usize] as usize]).collect());
        }
    }
    reps
}

/// Every `(A, F)` with `|A| ≤ n`.
pub fn models_up_to(n: u64) -> Vec<EtaleGroupModel> {
    abelian_groups_up_to(n)
        .into_iter()
        .flat_map(|g| {
            automorphisms(&g)
                .into_iter()
                .map(move |m| EtaleGroupModel::new(g.clone(), m).expect("automorphism"))
        })
        .collect()
}

/// One `(A, F)` per conjugacy class of `F`, for each `|A| ≤ n`.
pub fn model_classes_up_to(n: u64) -> Vec<EtaleGroupModel> {
    abelian_groups_up_to(n)
        .into_iter()
        .flat_map(|g| {
            automorphism_class_representatives(&g)
                .into_iter()
                .map(move |m| EtaleGroupModel::new(g.clone(), m).expect("automorphism"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_counts() {
        let counts: Vec<usize> = (1..=16).map(|n| abelian_groups(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5]);
        let f: Vec<Vec<u64>> = abelian_groups(16).iter().map(|g| g.factors().to_vec()).collect();
        assert!(f.contains(&vec![2, 2, 2, 2]) && f.contains(&vec![4, 4]) && f.contains(&vec![2, 8]));
        assert_eq!(abelian_groups(36).len(), 4);
    }

    #[test]
    fn automorphism_counts() {
        let aut = |f: Vec<u64>| automorphisms(&FgAbGroup::new(f).unwrap()).len();
        assert_eq!(aut(vec![12]), 4);
        assert_eq!(aut(vec![2, 2]), 6);
        assert_eq!(aut(vec![2, 4]), 8);
        assert_eq!(aut(vec![2, 2, 2]), 168);
        assert_eq!(aut(vec![3, 3]), 48);
        assert_eq!(aut(vec![]), 1);
        let classes = |f: Vec<u64>| automorphism_class_representatives(&FgAbGroup::new(f).unwrap()).len();
        // GL_2(F_2) ≅ S_3, GL_3(F_2) has 6 classes
        assert_eq!(classes(vec![2, 2]), 3);
        assert_eq!(classes(vec![2, 2, 2]), 6);
    }
}
