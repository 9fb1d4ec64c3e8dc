//! Projective automorphisms of a hyperplane arrangement by frame mapping.
//!
//! A matrix `A` acting on points is an automorphism when every form pulls
//! back to a multiple of a form: `L_i ∘ A ∝ L_σ(i)`. On dual vectors this is
//! `B = Aᵀ` with `B v_i ∝ v_σ(i)`. A projective map is fixed by the images of
//! a frame, so we search over images of one reference frame, pruned by
//! invariants of the dual point configuration, and solve exactly at leaves.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::exact::{primitive_integer, rank, QMat};
use super::DoubleCoverSpec;
use crate::error::{Error, Result};

/// Permutation of form indices: `perm[i] = σ(i)`.
pub type Perm = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Automorphism {
    /// Row-major primitive integer matrix acting on point coordinates.
    pub matrix: Vec<Vec<i64>>,
    pub perm: Perm,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupStructure {
    pub center_order: usize,
    pub exponent: usize,
    /// A central involution `z` and a subgroup `H` with `G = <z> × H`,
    /// `Z(H) ≅ C2^2` and `H / Z(H)` elementary abelian of order 8.
    pub c2_times_g32: bool,
    pub h_center_order: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AutGroup {
    pub elements: Vec<Automorphism>,
    pub generators: Vec<Automorphism>,
}

impl AutGroup {
    /// Order in PGL(n+1).
    pub fn pgl_order(&self) -> usize {
        self.elements.len()
    }

    /// Order of the automorphism group of the double cover, including the
    /// deck involution.
    pub fn cover_order(&self) -> usize {
        2 * self.elements.len()
    }

    pub fn perms(&self) -> Vec<Perm> {
        self.elements.iter().map(|a| a.perm.clone()).collect()
    }

    /// Orbits of the permutation action on forms.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let m = self.elements.first().map_or(0, |a| a.perm.len());
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for i in 0..m {
            if seen[i] {
                continue;
            }
            let orbit: BTreeSet<usize> = self.elements.iter().map(|a| a.perm[i]).collect();
            for &j in &orbit {
                seen[j] = true;
            }
            out.push(orbit.into_iter().collect());
        }
        out
    }

    /// True when the permutation set is closed under composition and inverse.
    pub fn is_closed(&self) -> bool {
        let set: HashSet<Perm> = self.perms().into_iter().collect();
        set.iter()
            .all(|a| set.contains(&invert(a)) && set.iter().all(|b| set.contains(&compose(a, b))))
    }

    pub fn structure(&self) -> GroupStructure {
        group_structure(&self.perms())
    }
}

/// `(a ∘ b)(i) = a(b(i))`.
pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

pub fn invert(a: &[usize]) -> Perm {
    let mut out = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j] = i;
    }
    out
}

fn identity(m: usize) -> Perm {
    (0..m).collect()
}

fn element_order(a: &[usize]) -> usize {
    let id = identity(a.len());
    let mut x = a.to_vec();
    let mut k = 1;
    while x != id {
        x = compose(a, &x);
        k += 1;
    }
    k
}

fn generated(gens: &[Perm], m: usize) -> HashSet<Perm> {
    let mut set: HashSet<Perm> = HashSet::new();
    set.insert(identity(m));
    let mut frontier = vec![identity(m)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = compose(g, &x);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

fn center(group: &[Perm]) -> Vec<Perm> {
    group
        .iter()
        .filter(|z| group.iter().all(|g| compose(z, g) == compose(g, z)))
        .cloned()
        .collect()
}

fn group_structure(group: &[Perm]) -> GroupStructure {
    let m = group.first().map_or(0, |g| g.len());
    let id = identity(m);
    let z_g = center(group);
    let exponent = group.iter().map(|g| element_order(g)).fold(1, num_integer::lcm);

    // Frattini subgroup of a 2-group: generated by squares and commutators.
    let mut phi_gens: Vec<Perm> = group.iter().map(|g| compose(g, g)).collect();
    for a in group {
        for b in group {
            phi_gens.push(compose(&compose(a, b), &compose(&invert(a), &invert(b))));
        }
    }
    phi_gens.sort();
    phi_gens.dedup();
    let phi = generated(&phi_gens, m);

    // A basis of G / Φ(G), chosen greedily.
    let mut basis: Vec<Perm> = Vec::new();
    let mut span = phi.clone();
    for g in group {
        if !span.contains(g) {
            basis.push(g.clone());
            let mut gens: Vec<Perm> = phi_gens.clone();
            gens.extend(basis.iter().cloned());
            span = generated(&gens, m);
        }
    }

    let mut c2_times_g32 = false;
    let mut h_center_order = None;
    let r = basis.len();
    let is_two_group = group.len().is_power_of_two();
    if is_two_group && r > 0 && r < 16 {
        let involutions: Vec<&Perm> = z_g.iter().filter(|z| **z != id).filter(|z| compose(z, z) == id).collect();
        'outer: for chi in 1u32..(1 << r) {
            // Kernel of the character sending basis[k] to (-1)^{chi_k}.
            let mut gens = phi_gens.clone();
            for (k, b) in basis.iter().enumerate() {
                if chi >> k & 1 == 0 {
                    gens.push(b.clone());
                }
            }
            for k1 in 0..r {
                for k2 in k1 + 1..r {
                    if chi >> k1 & 1 == 1 && chi >> k2 & 1 == 1 {
                        gens.push(compose(&basis[k1], &basis[k2]));
                    }
                }
            }
            let h = generated(&gens, m);
            if h.len() * 2 != group.len() {
                continue;
            }
            for z in &involutions {
                if h.contains(*z) {
                    continue;
                }
                let hv: Vec<Perm> = h.iter().cloned().collect();
                let zh = center(&hv);
                let zset: HashSet<&Perm> = zh.iter().collect();
                let elem_center = zh.iter().all(|c| compose(c, c) == id);
                let quotient_elem_abelian = hv.iter().all(|a| zset.contains(&compose(a, a)))
                    && hv.iter().all(|a| {
                        hv.iter().all(|b| {
                            zset.contains(&compose(&compose(a, b), &compose(&invert(a), &invert(b))))
                        })
                    });
                h_center_order = Some(zh.len());
                if zh.len() == 4 && elem_center && quotient_elem_abelian && hv.len() / zh.len() == 8 {
                    c2_times_g32 = true;
                    break 'outer;
                }
            }
        }
    }
    GroupStructure {
        center_order: z_g.len(),
        exponent,
        c2_times_g32,
        h_center_order,
    }
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn normalize_key(v: &[BigRational]) -> Vec<BigInt> {
    primitive_integer(v)
}

/// Forms spanned by each pair of dual points.
fn pair_signatures(forms: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let m = forms.len();
    let mut sig = vec![vec![0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let c = (0..m)
                .filter(|&k| {
                    rank(&[forms[i].as_slice(), forms[j].as_slice(), forms[k].as_slice()]) == 2
                })
                .count();
            sig[i][j] = c;
            sig[j][i] = c;
        }
    }
    sig
}

fn find_frame(forms: &[Vec<i64>], n: usize) -> Option<Vec<usize>> {
    let m = forms.len();
    let size = n + 2;
    if m < size {
        return None;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let general = (0..size).all(|skip| {
            let rows: Vec<&[i64]> = idx
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &i)| forms[i].as_slice())
                .collect();
            rank(&rows) == n + 1
        });
        if general {
            return Some(idx);
        }
        // next combination
        let mut k = size;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if idx[k] < m - size + k {
                idx[k] += 1;
                for j in k + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn automorphism_group(spec: &DoubleCoverSpec) -> Result<AutGroup> {
    let n = spec.dim();
    let forms = spec.forms();
    let m = forms.len();
    let frame = find_frame(forms, n).ok_or_else(|| {
        Error::InvalidArrangement("arrangement contains no projective frame".into())
    })?;
    let sig = pair_signatures(forms);
    let point_sig: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            let mut s: Vec<usize> = (0..m).filter(|&j| j != i).map(|j| sig[i][j]).collect();
            s.sort();
            s
        })
        .collect();
    let lookup: HashMap<Vec<BigInt>, usize> = forms
        .iter()
        .enumerate()
        .map(|(i, f)| (f.iter().map(|&x| BigInt::from(x)).collect(), i))
        .collect();
    let qforms: Vec<Vec<BigRational>> =
        forms.iter().map(|f| f.iter().map(|&x| q(x)).collect()).collect();

    // Frame coordinates of the last frame point in the basis of the first n+1.
    let r = QMat::from_cols(&frame[..=n].iter().map(|&i| qforms[i].clone()).collect::<Vec<_>>());
    let r_inv = r.inverse().expect("frame basis is independent");
    let gamma = r_inv.apply(&qforms[frame[n + 1]]);

    let mut found: Vec<Automorphism> = Vec::new();
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut images: Vec<usize> = Vec::with_capacity(n + 2);

    fn dfs(
        depth: usize,
        images: &mut Vec<usize>,
        ctx: &Search<'_>,
        out: &mut Vec<Automorphism>,
        seen: &mut HashSet<Perm>,
    ) {
        if depth == ctx.frame.len() {
            if let Some(a) = ctx.solve(images) {
                if seen.insert(a.perm.clone()) {
                    out.push(a);
                }
            }
            return;
        }
        let src = ctx.frame[depth];
        for cand in 0..ctx.forms.len() {
            if images.contains(&cand) || ctx.point_sig[cand] != ctx.point_sig[src] {
                continue;
            }
            let consistent = images
                .iter()
                .enumerate()
                .all(|(k, &img)| ctx.sig[ctx.frame[k]][src] == ctx.sig[img][cand]);
            if !consistent {
                continue;
            }
            images.push(cand);
            let independent = {
                let take = images.len().min(ctx.n + 1);
                // every subset of the images of size <= n+1 that ends with the
                // new point must stay independent; checking the tail windows
                // is enough to prune most branches
                let rows: Vec<&[i64]> = images[images.len() - take..]
                    .iter()
                    .map(|&i| ctx.forms[i].as_slice())
                    .collect();
                rank(&rows) == take
            };
            if independent {
                dfs(depth + 1, images, ctx, out, seen);
            }
            images.pop();
        }
    }

    let search = Search {
        n,
        forms,
        qforms: &qforms,
        frame: &frame,
        sig: &sig,
        point_sig: &point_sig,
        lookup: &lookup,
        r_inv: &r_inv,
        gamma: &gamma,
    };
    dfs(0, &mut images, &search, &mut found, &mut seen);

    found.sort_by(|a, b| a.perm.cmp(&b.perm));
    let mut generators: Vec<Automorphism> = Vec::new();
    let mut span = generated(&[], m);
    for a in &found {
        if !span.contains(&a.perm) {
            generators.push(a.clone());
            let gens: Vec<Perm> = generators.iter().map(|g| g.perm.clone()).collect();
            span = generated(&gens, m);
        }
    }
    Ok(AutGroup {
        elements: found,
        generators,
    })
}

struct Search<'a> {
    n: usize,
    forms: &'a [Vec<i64>],
    qforms: &'a [Vec<BigRational>],
    frame: &'a [usize],
    sig: &'a [Vec<usize>],
    point_sig: &'a [Vec<usize>],
    lookup: &'a HashMap<Vec<BigInt>, usize>,
    r_inv: &'a QMat,
    gamma: &'a [BigRational],
}

impl Search<'_> {
    fn solve(&self, images: &[usize]) -> Option<Automorphism> {
        let n = self.n;
        let t = QMat::from_cols(
            &images[..=n]
                .iter()
                .map(|&i| self.qforms[i].clone())
                .collect::<Vec<_>>(),
        );
        let delta = t.solve(&self.qforms[images[n + 1]])?;
        if delta.iter().any(|d| d.is_zero()) {
            return None;
        }
        // B = T · diag(delta/gamma) · R^{-1}
        let mut scaled = t.clone();
        for (col, (d, g)) in delta.iter().zip(self.gamma).enumerate() {
            let s = d / g;
            for row in scaled.e.iter_mut() {
                row[col] = &row[col] * &s;
            }
        }
        let b = scaled.mul(self.r_inv);
        let mut perm = Vec::with_capacity(self.forms.len());
        for v in self.qforms {
            let img = b.apply(v);
            let j = *self.lookup.get(&normalize_key(&img))?;
            perm.push(j);
        }
        let mut seen = vec![false; perm.len()];
        for &j in &perm {
            if std::mem::replace(&mut seen[j], true) {
                return None;
            }
        }
        let a = b.transpose();
        let flat: Vec<BigRational> = a.e.iter().flatten().cloned().collect();
        let ints = primitive_integer(&flat);
        let matrix = ints
            .chunks(n + 1)
            .map(|row| row.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(Automorphism { matrix, perm })
    }
}
