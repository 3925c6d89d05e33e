//! Stabilizer chains for permutation groups on a small point set.
//!
//! Supports three jobs: certifying the group order against an independently
//! known value, streaming every group element exactly once (as the images of
//! a few chosen points, so the reflection matrix can be read off without
//! composing full permutations per element), and conjugacy-class fusion via
//! a perfect rank/unrank of elements into `0..|G|`.

use std::collections::VecDeque;

use num_bigint::BigUint;
use rayon::prelude::*;

/// A permutation of `0..n` stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm(pub Box<[u16]>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u16).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: u16) -> u16 {
        self.0[x as usize]
    }

    /// `self` after `other`: `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y as usize] = x as u16;
        }
        Perm(inv.into_boxed_slice())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x as u16 == y)
    }

    fn first_moved(&self) -> Option<u16> {
        self.0
            .iter()
            .enumerate()
            .find(|&(x, &y)| x as u16 != y)
            .map(|(x, _)| x as u16)
    }
}

struct Level {
    base: u16,
    /// Generators first discovered at this level.  The group of level `l`
    /// is generated by the union of `own_gens` over levels `l..`, so orbit
    /// and Schreier computations always work with that union.
    own_gens: Vec<Perm>,
    /// Orbit of `base` in discovery order; `orbit[0] == base`.
    orbit: Vec<u16>,
    /// Point -> orbit position, or -1.
    pos: Vec<i32>,
    /// `transversal[i]` maps `base` to `orbit[i]`; `transversal[0]` is the
    /// identity.
    transversal: Vec<Perm>,
    transversal_inv: Vec<Perm>,
}

impl Level {
    fn new(n_points: usize, base: u16) -> Level {
        Level {
            base,
            own_gens: Vec::new(),
            orbit: Vec::new(),
            pos: vec![-1; n_points],
            transversal: Vec::new(),
            transversal_inv: Vec::new(),
        }
    }

    fn recompute_orbit(&mut self, n_points: usize, gens: &[Perm]) {
        self.orbit.clear();
        self.transversal.clear();
        self.transversal_inv.clear();
        self.pos = vec![-1; n_points];
        self.orbit.push(self.base);
        self.pos[self.base as usize] = 0;
        let id = Perm::identity(n_points);
        self.transversal.push(id.clone());
        self.transversal_inv.push(id);
        let mut head = 0;
        while head < self.orbit.len() {
            let p = self.orbit[head];
            let up = self.transversal[head].clone();
            for g in gens {
                let q = g.apply(p);
                if self.pos[q as usize] < 0 {
                    self.pos[q as usize] = self.orbit.len() as i32;
                    self.orbit.push(q);
                    let t = g.compose(&up);
                    self.transversal_inv.push(t.inverse());
                    self.transversal.push(t);
                }
            }
            head += 1;
        }
    }
}

pub struct StabChain {
    n_points: usize,
    gens: Vec<Perm>,
    levels: Vec<Level>,
}

impl StabChain {
    /// Builds a complete stabilizer chain by the deterministic
    /// Schreier-Sims procedure.  If `expected_order` is given, the final
    /// transversal-size product is asserted against it.
    pub fn new(n_points: usize, gens: Vec<Perm>, expected_order: Option<&BigUint>) -> StabChain {
        let mut chain = StabChain { n_points, gens: gens.clone(), levels: Vec::new() };
        chain.insert_level_gens(0, gens);
        chain.close();
        if let Some(expected) = expected_order {
            let got = chain.order();
            assert_eq!(&got, expected, "stabilizer chain order certificate failed");
        }
        chain
    }

    /// Generators of the level-`l` group: everything discovered at this
    /// level or deeper (all of which stabilize the earlier base points).
    fn group_gens_at(&self, level: usize) -> Vec<Perm> {
        self.levels[level..]
            .iter()
            .flat_map(|lv| lv.own_gens.iter().cloned())
            .collect()
    }

    fn insert_level_gens(&mut self, level: usize, new_gens: Vec<Perm>) {
        if self.levels.len() == level {
            // Base point: first point moved by any of the incoming gens.
            let base = new_gens
                .iter()
                .filter_map(Perm::first_moved)
                .min()
                .expect("non-identity generator");
            self.levels.push(Level::new(self.n_points, base));
        }
        self.levels[level].own_gens.extend(new_gens);
        // The new generators join the groups of this level and every level
        // above it, so all those orbits can grow.
        for l in (0..=level).rev() {
            let gens = self.group_gens_at(l);
            self.levels[l].recompute_orbit(self.n_points, &gens);
        }
    }

    /// Repeatedly sifts Schreier generators until every one reaches the
    /// identity, which certifies the chain complete.
    fn close(&mut self) {
        'outer: loop {
            for l in 0..self.levels.len() {
                let gens = self.group_gens_at(l);
                let lv = &self.levels[l];
                for oi in 0..lv.orbit.len() {
                    for g in &gens {
                        let up = &lv.transversal[oi];
                        let q = g.apply(lv.orbit[oi]);
                        let uq_inv = &lv.transversal_inv[lv.pos[q as usize] as usize];
                        let schreier = uq_inv.compose(&g.compose(up));
                        if schreier.is_identity() {
                            continue;
                        }
                        if let Some((residue, stuck)) = self.sift_from(l + 1, schreier) {
                            self.insert_level_gens(stuck, vec![residue]);
                            continue 'outer;
                        }
                    }
                }
            }
            return;
        }
    }

    /// Sifts through levels `from..`; returns the nontrivial residue and the
    /// level where it belongs, or `None` if it reaches the identity.
    fn sift_from(&self, from: usize, mut g: Perm) -> Option<(Perm, usize)> {
        for l in from..self.levels.len() {
            let lv = &self.levels[l];
            let p = g.apply(lv.base);
            let j = lv.pos[p as usize];
            if j < 0 {
                return Some((g, l));
            }
            g = lv.transversal_inv[j as usize].compose(&g);
        }
        if g.is_identity() {
            None
        } else {
            Some((g, self.levels.len()))
        }
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .map(|l| BigUint::from(l.orbit.len()))
            .product()
    }

    /// The group generators this chain was built from.
    pub fn group_gens(&self) -> &[Perm] {
        &self.gens
    }

    pub fn order_u64(&self) -> u64 {
        self.levels.iter().map(|l| l.orbit.len() as u64).product()
    }

    /// Streams the images of `points` under every group element exactly
    /// once, in parallel over top-level transversal blocks, merging the
    /// per-block accumulators.  `merge` must be associative and insensitive
    /// to block order.
    pub fn par_fold_images<A: Send>(
        &self,
        points: &[u16],
        make_acc: impl Fn() -> A + Sync,
        visit: impl Fn(&mut A, &[u16]) + Sync,
        merge: impl Fn(A, A) -> A + Send + Sync,
    ) -> A {
        if self.levels.is_empty() {
            // Trivial group: only the identity.
            let mut acc = make_acc();
            let img: Vec<u16> = points.to_vec();
            visit(&mut acc, &img);
            return acc;
        }
        if self.levels.len() == 1 {
            let mut acc = make_acc();
            let mut img = vec![0u16; points.len()];
            for u in &self.levels[0].transversal {
                for (s, &p) in img.iter_mut().zip(points) {
                    *s = u.apply(p);
                }
                visit(&mut acc, &img);
            }
            return acc;
        }
        // Element = u_0 . u_1 ... u_{L-1}; branch in parallel on u_1, walk
        // the deeper levels inside a block, and keep the big level-0
        // transversal innermost so each element costs only a few lookups.
        let blocks: Vec<&Perm> = self.levels[1].transversal.iter().collect();
        blocks
            .into_par_iter()
            .map(|u1| {
                let mut acc = make_acc();
                let mut img = vec![0u16; points.len()];
                self.walk_tails(2, u1.clone(), points, &mut img, &mut acc, &visit);
                acc
            })
            .reduce_with(&merge)
            .unwrap_or_else(make_acc)
    }

    fn walk_tails<A>(
        &self,
        level: usize,
        tail: Perm,
        points: &[u16],
        img: &mut [u16],
        acc: &mut A,
        visit: &(impl Fn(&mut A, &[u16]) + Sync),
    ) {
        if level == self.levels.len() {
            let ys: Vec<u16> = points.iter().map(|&p| tail.apply(p)).collect();
            for u0 in &self.levels[0].transversal {
                for (s, &y) in img.iter_mut().zip(&ys) {
                    *s = u0.apply(y);
                }
                visit(acc, img);
            }
            return;
        }
        for u in &self.levels[level].transversal {
            self.walk_tails(level + 1, tail.compose(u), points, img, acc, visit);
        }
    }

    /// Perfect rank of a group element into `0..|G|` via its mixed-radix
    /// transversal coordinates.  Panics if `g` is not in the group.
    pub fn rank_of(&self, g: &Perm) -> u64 {
        let mut idx = 0u64;
        let mut g = g.clone();
        for lv in &self.levels {
            let p = g.apply(lv.base);
            let j = lv.pos[p as usize];
            assert!(j >= 0, "element not in group");
            idx = idx * lv.orbit.len() as u64 + j as u64;
            g = lv.transversal_inv[j as usize].compose(&g);
        }
        assert!(g.is_identity(), "element not in group");
        idx
    }

    /// Inverse of [`rank_of`].
    pub fn unrank(&self, mut idx: u64) -> Perm {
        let mut coords = Vec::with_capacity(self.levels.len());
        for lv in self.levels.iter().rev() {
            let size = lv.orbit.len() as u64;
            coords.push((idx % size) as usize);
            idx /= size;
        }
        assert_eq!(idx, 0, "rank out of range");
        let mut g = Perm::identity(self.n_points);
        for (lv, &j) in self.levels.iter().zip(coords.iter().rev()) {
            g = g.compose(&lv.transversal[j]);
        }
        g
    }

    /// Conjugacy classes by orbit fusion under conjugation, using a bit set
    /// over element ranks.  Returns deterministically ordered
    /// (representative, class size) pairs: representatives are the
    /// lowest-ranked elements of their classes, scanned in rank order.
    pub fn conjugacy_classes(&self) -> Vec<(Perm, u64)> {
        let order = self.order_u64();
        assert!(order <= 1 << 33, "class fusion is sized for desk-scale groups");
        let mut visited = vec![0u64; (order as usize + 63) / 64];
        let mark = |bits: &mut Vec<u64>, i: u64| -> bool {
            let (w, b) = ((i / 64) as usize, i % 64);
            let fresh = bits[w] & (1 << b) == 0;
            bits[w] |= 1 << b;
            fresh
        };
        let gens_with_inv: Vec<(Perm, Perm)> = self
            .gens
            .iter()
            .map(|g| (g.clone(), g.inverse()))
            .collect();
        let mut classes = Vec::new();
        for start in 0..order {
            let (w, b) = ((start / 64) as usize, start % 64);
            if visited[w] & (1 << b) != 0 {
                continue;
            }
            let rep = self.unrank(start);
            mark(&mut visited, start);
            let mut size = 1u64;
            let mut queue = VecDeque::new();
            queue.push_back(rep.clone());
            while let Some(x) = queue.pop_front() {
                for (g, g_inv) in &gens_with_inv {
                    let y = g_inv.compose(&x.compose(g));
                    let r = self.rank_of(&y);
                    if mark(&mut visited, r) {
                        size += 1;
                        queue.push_back(y);
                    }
                }
            }
            classes.push((rep, size));
        }
        classes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_data::{self, SimpleType};

    fn perm_gens(t: SimpleType) -> (usize, Vec<Perm>) {
        let rts = root_data::roots(t);
        let idx = root_data::root_index(&rts);
        let gens = root_data::simple_reflections(t)
            .iter()
            .map(|m| {
                Perm(
                    rts.iter()
                        .map(|r| idx[&m.apply(r)] as u16)
                        .collect::<Vec<_>>()
                        .into_boxed_slice(),
                )
            })
            .collect();
        (rts.len(), gens)
    }

    #[test]
    fn chain_orders_match_degree_products() {
        for name in ["A1", "A3", "B3", "D4", "G2", "F4", "E6"] {
            let t: SimpleType = name.parse().unwrap();
            let (n, gens) = perm_gens(t);
            let chain = StabChain::new(n, gens, Some(&root_data::weyl_order(t)));
            assert_eq!(chain.order(), root_data::weyl_order(t), "{name}");
        }
    }

    #[test]
    fn stream_visits_every_element_once() {
        let t: SimpleType = "B3".parse().unwrap();
        let (n, gens) = perm_gens(t);
        let chain = StabChain::new(n, gens, None);
        let points: Vec<u16> = (0..n as u16).collect();
        let seen = chain.par_fold_images(
            &points,
            std::collections::HashSet::new,
            |set, img| {
                set.insert(img.to_vec());
            },
            |mut a, b| {
                a.extend(b);
                a
            },
        );
        assert_eq!(seen.len(), 48);
    }

    #[test]
    fn rank_unrank_roundtrip() {
        let t: SimpleType = "B3".parse().unwrap();
        let (n, gens) = perm_gens(t);
        let chain = StabChain::new(n, gens, None);
        for idx in 0..chain.order_u64() {
            let g = chain.unrank(idx);
            assert_eq!(chain.rank_of(&g), idx);
        }
    }

    #[test]
    fn class_fusion_counts() {
        // S4 as W(A3): 5 classes of sizes 1, 6, 3, 8, 6.
        let t: SimpleType = "A3".parse().unwrap();
        let (n, gens) = perm_gens(t);
        let chain = StabChain::new(n, gens, None);
        let classes = chain.conjugacy_classes();
        let mut sizes: Vec<u64> = classes.iter().map(|&(_, s)| s).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
        assert_eq!(sizes.iter().sum::<u64>(), 24);
    }
}
