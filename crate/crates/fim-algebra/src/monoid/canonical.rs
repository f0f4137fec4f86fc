//! Canonical forms for the leveled monoid and its pedestal quotient.

use super::{Gen, GenKind, MWord};
use std::collections::BTreeMap;
use std::fmt;

/// Canonical leveled tuple: `x_count·x_N + y_count·y_N + z_count·z_N + Σ a_i`.
///
/// Invariants: if `x_count ≥ 1` then `z_count = 0`; the level-lowering move is
/// inapplicable; if all three counts vanish then `level = 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalM {
    pub level: u32,
    pub x_count: u64,
    pub y_count: u64,
    pub z_count: u64,
    pub pedestal: BTreeMap<u32, u64>,
}

impl fmt::Debug for CanonicalM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(N={}, x={}, y={}, z={}, a={:?})",
            self.level, self.x_count, self.y_count, self.z_count, self.pedestal
        )
    }
}

impl CanonicalM {
    pub fn to_word(&self) -> MWord {
        let mut w = MWord::zero();
        w.push(Gen::x(self.level), self.x_count);
        w.push(Gen::y(self.level), self.y_count);
        w.push(Gen::z(self.level), self.z_count);
        for (&i, &m) in &self.pedestal {
            w.push(Gen::a(i), m);
        }
        w
    }

    pub fn is_zero(&self) -> bool {
        self.x_count == 0 && self.y_count == 0 && self.z_count == 0 && self.pedestal.is_empty()
    }
}

/// Canonical form in the monoid: (1) raise every x/y/z generator to the
/// common maximal level, accumulating pedestal generators; (2) with an x
/// present, convert z's to y's; (3) lower the level whenever the y-surplus
/// and the pedestal permit; repeat (2)-(3) to a fixed point.
pub fn canonicalize_m(w: &MWord) -> CanonicalM {
    let mut top = 0u32;
    for (g, _) in w.iter() {
        if g.kind != GenKind::A {
            top = top.max(g.index);
        }
    }
    let n = top as usize;
    let mut xs = vec![0u64; n + 1];
    let mut ys = vec![0u64; n + 1];
    let mut zs = vec![0u64; n + 1];
    let mut pedestal: BTreeMap<u32, u64> = BTreeMap::new();
    for (g, m) in w.iter() {
        match g.kind {
            GenKind::X => xs[g.index as usize] += m,
            GenKind::Y => ys[g.index as usize] += m,
            GenKind::Z => zs[g.index as usize] += m,
            GenKind::A => *pedestal.entry(g.index).or_insert(0) += m,
        }
    }

    // Raise: x_l = x_{l+1} + y_{l+1}; y_l = y_{l+1} + a_{l+1}; z_l = z_{l+1} + a_{l+1}.
    for l in 0..n {
        let (x, y, z) = (xs[l], ys[l], zs[l]);
        if y + z > 0 {
            *pedestal.entry((l + 1) as u32).or_insert(0) += y + z;
        }
        xs[l + 1] += x;
        ys[l + 1] += x + y;
        zs[l + 1] += z;
        xs[l] = 0;
        ys[l] = 0;
        zs[l] = 0;
    }

    let mut level = top;
    let x = xs[n];
    let mut y = ys[n];
    let mut z = zs[n];

    loop {
        // With an x present, x + z = x + y lets us eliminate z.
        if x >= 1 && z > 0 {
            y += z;
            z = 0;
        }
        if x == 0 && y == 0 && z == 0 {
            level = 0;
            break;
        }
        if level == 0 || y < x {
            break;
        }
        let need = y - x + z;
        let have = pedestal.get(&level).copied().unwrap_or(0);
        if have < need {
            break;
        }
        if need > 0 {
            if have == need {
                pedestal.remove(&level);
            } else {
                pedestal.insert(level, have - need);
            }
        }
        y -= x;
        level -= 1;
    }

    CanonicalM {
        level,
        x_count: x,
        y_count: y,
        z_count: z,
        pedestal,
    }
}

pub fn equals_m(w1: &MWord, w2: &MWord) -> bool {
    canonicalize_m(w1) == canonicalize_m(w2)
}

pub fn add_m(c1: &CanonicalM, c2: &CanonicalM) -> CanonicalM {
    canonicalize_m(&c1.to_word().add(&c2.to_word()))
}

/// Canonical form in the pedestal quotient: `x_count·x̄_level + y_count·ȳ +
/// z_count·z̄`.
///
/// Invariants: if `x_count ≥ 1` then `z_count = 0`; if `x_count ≥ 1` and
/// `level ≥ 1` then `y_count < x_count`; if `x_count = 0` then `level = 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct CanonicalMbar {
    pub x_count: u64,
    pub level: u32,
    pub y_count: u64,
    pub z_count: u64,
}

impl CanonicalMbar {
    fn canonicalize(mut self) -> CanonicalMbar {
        if self.x_count >= 1 {
            self.y_count += self.z_count;
            self.z_count = 0;
            // x̄_n + ȳ = x̄_{n−1}: lowering all x's one level consumes x_count y's.
            while self.level >= 1 && self.y_count >= self.x_count {
                self.y_count -= self.x_count;
                self.level -= 1;
            }
        } else {
            self.level = 0;
        }
        self
    }

    pub fn add(&self, other: &CanonicalMbar) -> CanonicalMbar {
        // Raise the lower-level x's to the common level, each raise freeing a ȳ.
        let level = self.level.max(other.level);
        let raise =
            |c: &CanonicalMbar| -> (u64, u64) { (c.x_count, c.y_count + c.x_count * u64::from(level - c.level)) };
        let (x1, y1) = raise(self);
        let (x2, y2) = raise(other);
        CanonicalMbar {
            x_count: x1 + x2,
            level: if x1 + x2 > 0 { level } else { 0 },
            y_count: y1 + y2,
            z_count: self.z_count + other.z_count,
        }
        .canonicalize()
    }
}

/// Project a word to the pedestal quotient: the a-generators die, every
/// `y_l`, `z_l` collapses to `ȳ`, `z̄`, and the result re-canonicalizes.
pub fn mbar_project(w: &MWord) -> CanonicalMbar {
    let mut per_level: BTreeMap<u32, u64> = BTreeMap::new();
    let mut y = 0u64;
    let mut z = 0u64;
    for (g, m) in w.iter() {
        match g.kind {
            GenKind::X => *per_level.entry(g.index).or_insert(0) += m,
            GenKind::Y => y += m,
            GenKind::Z => z += m,
            GenKind::A => {}
        }
    }
    let top = per_level.keys().max().copied().unwrap_or(0);
    let mut x = 0u64;
    for (l, m) in per_level {
        // x̄_l = x̄_{l+1} + ȳ, applied (top − l) times to each of the m copies.
        x += m;
        y += m * u64::from(top - l);
    }
    CanonicalMbar {
        x_count: x,
        level: if x > 0 { top } else { 0 },
        y_count: y,
        z_count: z,
    }
    .canonicalize()
}

#[cfg(test)]
mod tests {
    use super::super::{order_unit, state_value, Gen, MWord};
    use super::*;
    use proptest::prelude::*;

    fn w(pairs: &[(Gen, u64)]) -> MWord {
        MWord::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn defining_relation_collapses() {
        // x_0 + z_0 and x_0 + y_0 share one canonical form.
        let left = w(&[(Gen::x(0), 1), (Gen::z(0), 1)]);
        let right = order_unit();
        let c = canonicalize_m(&left);
        assert_eq!(c, canonicalize_m(&right));
        assert_eq!((c.level, c.x_count, c.y_count, c.z_count), (0, 1, 1, 0));
        assert!(c.pedestal.is_empty());
    }

    #[test]
    fn zero_word() {
        let c = canonicalize_m(&MWord::zero());
        assert!(c.is_zero());
        assert_eq!(c.level, 0);
    }

    #[test]
    fn level_lowering() {
        // y_1 + a_1 lowers to y_0.
        let c = canonicalize_m(&w(&[(Gen::y(1), 1), (Gen::a(1), 1)]));
        assert_eq!(c, canonicalize_m(&MWord::gen(Gen::y(0))));
        assert_eq!((c.level, c.y_count), (0, 1));
    }

    #[test]
    fn mixed_levels_raise() {
        // y_0 + y_3 = 2·y_3 + a_1 + a_2 + a_3 and does not lower further.
        let c = canonicalize_m(&w(&[(Gen::y(0), 1), (Gen::y(3), 1)]));
        assert_eq!((c.level, c.x_count, c.y_count, c.z_count), (3, 0, 2, 0));
        assert_eq!(
            c.pedestal,
            [(1u32, 1u64), (2, 1), (3, 1)].into_iter().collect()
        );
        let expanded = w(&[(Gen::y(3), 2), (Gen::a(1), 1), (Gen::a(2), 1), (Gen::a(3), 1)]);
        assert!(equals_m(&w(&[(Gen::y(0), 1), (Gen::y(3), 1)]), &expanded));
    }

    #[test]
    fn y_and_z_stay_distinct() {
        assert!(!equals_m(
            &MWord::gen(Gen::y(0)),
            &MWord::gen(Gen::z(0))
        ));
    }

    #[test]
    fn add_raises_and_lowers() {
        // x_1 + y_1 = x_0.
        let c1 = canonicalize_m(&MWord::gen(Gen::x(1)));
        let c2 = canonicalize_m(&MWord::gen(Gen::y(1)));
        assert_eq!(add_m(&c1, &c2), canonicalize_m(&MWord::gen(Gen::x(0))));
        // Adding zero is neutral.
        let zero = canonicalize_m(&MWord::zero());
        assert_eq!(add_m(&c1, &zero), c1);
    }

    #[test]
    fn canonicalize_is_idempotent_on_samples() {
        let samples = vec![
            MWord::zero(),
            order_unit(),
            w(&[(Gen::x(2), 3), (Gen::z(2), 1), (Gen::a(2), 5)]),
            w(&[(Gen::y(0), 1), (Gen::y(3), 1)]),
            w(&[(Gen::x(0), 1), (Gen::x(1), 1), (Gen::z(0), 2)]),
        ];
        for s in samples {
            let c = canonicalize_m(&s);
            assert_eq!(canonicalize_m(&c.to_word()), c);
        }
    }

    #[test]
    fn mbar_projection() {
        // a-generators die in the quotient.
        let c = mbar_project(&w(&[(Gen::x(1), 1), (Gen::a(7), 1)]));
        assert_eq!(
            c,
            CanonicalMbar {
                x_count: 1,
                level: 1,
                y_count: 0,
                z_count: 0
            }
        );
        // x̄_n + ȳ with enough ȳ's lowers: x̄_1 + ȳ = x̄_0.
        let c = mbar_project(&w(&[(Gen::x(1), 1), (Gen::y(4), 1)]));
        assert_eq!(
            c,
            CanonicalMbar {
                x_count: 1,
                level: 0,
                y_count: 0,
                z_count: 0
            }
        );
        assert_eq!(mbar_project(&MWord::gen(Gen::a(3))).x_count, 0);
    }

    #[test]
    fn mbar_project_is_homomorphism_on_samples() {
        let samples = vec![
            MWord::zero(),
            order_unit(),
            w(&[(Gen::x(2), 2), (Gen::y(1), 1)]),
            w(&[(Gen::z(0), 3), (Gen::a(1), 2)]),
            w(&[(Gen::x(0), 1), (Gen::x(3), 1)]),
        ];
        for s in &samples {
            for t in &samples {
                assert_eq!(
                    mbar_project(&s.add(t)),
                    mbar_project(s).add(&mbar_project(t))
                );
            }
        }
    }

    #[test]
    fn mbar_lowering_invariant() {
        // r x̄_n + s ȳ with n ≥ 1 and s ≥ r re-canonicalizes to level n−1.
        for r in 1u64..4 {
            for n in 1u32..4 {
                let c = mbar_project(&w(&[(Gen::x(n), r), (Gen::y(5), r)]));
                assert!(c.level <= n - 1, "r={r} n={n}: {c:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn canonicalize_idempotent(
            pairs in proptest::collection::vec((0u8..4, 0u32..4, 1u64..3), 0..6)
        ) {
            let mut word = MWord::zero();
            for (k, i, m) in pairs {
                let kind = [GenKind::X, GenKind::Y, GenKind::Z, GenKind::A][k as usize];
                let idx = if kind == GenKind::A { i + 1 } else { i };
                word.push(Gen::new(kind, idx), m);
            }
            let c = canonicalize_m(&word);
            prop_assert_eq!(canonicalize_m(&c.to_word()), c.clone());
            // The state homomorphism is preserved by canonicalization.
            prop_assert_eq!(state_value(&word), state_value(&c.to_word()));
        }
    }
}
