//! Latin square constructions: the cyclic square, Jacobson-Matthews
//! random squares, and two-class blow-ups.
//!
//! The blow-up doubles an order-`m` square `M` into an order-`2m` square
//! `L[p][q] = M[a][b] + m * [class(p) != class(q)]`, where `a` is the rank
//! of `p` among positions of its class (likewise `b`). Cell values stay in
//! the lower half exactly when the row and column classes agree, which is
//! the discrete analogue of the step-latinon support rule; the parity and
//! quadrant class vectors select which latinon the sequence tracks.

use alloc::vec;
use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::mc::{block_rng, derive_seed, domain, draw_below};
use crate::square::LatinSquare;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("class vector must contain equally many zeros and ones")]
    UnbalancedClassVector,
    #[error("quadrant classes need a length divisible by 4, got {0}")]
    QuadrantLengthNotDivisibleBy4(usize),
    #[error("{kind} squares need order at least {min}, got {order}")]
    OrderTooSmall { kind: &'static str, min: usize, order: usize },
    #[error("{kind} blow-up order must be {multiple_of}-divisible, got {order}")]
    BlowupOrder { kind: &'static str, multiple_of: usize, order: usize },
    #[error("inner square has order {inner}, expected {expected}")]
    InnerOrderMismatch { inner: usize, expected: usize },
}

/// Balanced two-class labelling of `2m` positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassVector {
    classes: Vec<u8>,
}

impl ClassVector {
    /// Validates a `{0,1}` sequence with equally many of each class.
    pub fn new(classes: Vec<u8>) -> Result<Self, GenError> {
        let zeros = classes.iter().filter(|&&c| c == 0).count();
        if classes.is_empty()
            || zeros * 2 != classes.len()
            || classes.iter().any(|&c| c > 1)
        {
            return Err(GenError::UnbalancedClassVector);
        }
        Ok(Self { classes })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[u8] {
        &self.classes
    }
}

/// `(0,1,0,1,...)` of length `2m`: the interleaving induced by sorting the
/// images of the doubling map.
pub fn parity_classes(m: usize) -> ClassVector {
    assert!(m >= 1);
    ClassVector {
        classes: (0..2 * m).map(|i| (i % 2) as u8).collect(),
    }
}

/// Zeros on the first and last quarters, ones on the middle half; length
/// `2m` must be divisible by 4.
pub fn quadrant_classes(m: usize) -> Result<ClassVector, GenError> {
    let len = 2 * m;
    if len % 4 != 0 {
        return Err(GenError::QuadrantLengthNotDivisibleBy4(len));
    }
    let quarter = len / 4;
    let classes = (0..len)
        .map(|i| u8::from(i >= quarter && i < len - quarter))
        .collect();
    Ok(ClassVector { classes })
}

/// The cyclic square `L[i][j] = ((i + j) mod n) + 1` (0-based indices).
pub fn gen_cyclic(n: usize) -> LatinSquare {
    assert!(n >= 1);
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            cells.push(((i + j) % n) as u32 + 1);
        }
    }
    LatinSquare::new(n, cells).expect("cyclic construction is Latin")
}

/// Default walk length for [`gen_jm`]: `5 * n^3` moves.
pub fn default_jm_steps(n: usize) -> u64 {
    5 * (n as u64).pow(3)
}

/// Random Latin square by the Jacobson-Matthews +/-1 walk over proper and
/// improper squares, started from the cyclic square.
///
/// Performs `steps` moves (default `5 n^3`), then finishes any improper
/// chain so the result is proper. Bit-reproducible for fixed
/// `(n, seed, steps)`.
pub fn gen_jm(n: usize, seed: u64, steps: Option<u64>) -> Result<LatinSquare, GenError> {
    if n < 2 {
        return Err(GenError::OrderTooSmall { kind: "jm", min: 2, order: n });
    }
    let steps = steps.unwrap_or_else(|| default_jm_steps(n)).max(1);
    let mut cube = Cube::cyclic(n);
    let mut rng = block_rng(seed, domain::JM_WALK, 0);
    let mut improper: Option<(usize, usize, usize)> = None;
    let mut moves = 0u64;
    while moves < steps || improper.is_some() {
        improper = match improper {
            None => cube.proper_move(&mut rng),
            Some(cell) => cube.improper_move(&mut rng, cell),
        };
        moves += 1;
    }
    Ok(cube.into_square())
}

/// Incidence cube `f(r, c, s)` over `{-1, 0, 1}`; all line sums are 1 and
/// at most one cell is -1.
struct Cube {
    n: usize,
    f: Vec<i8>,
}

impl Cube {
    fn cyclic(n: usize) -> Self {
        let mut f = vec![0i8; n * n * n];
        for r in 0..n {
            for c in 0..n {
                f[(r * n + c) * n + (r + c) % n] = 1;
            }
        }
        Cube { n, f }
    }

    #[inline]
    fn idx(&self, r: usize, c: usize, s: usize) -> usize {
        (r * self.n + c) * self.n + s
    }

    fn symbol_at(&self, r: usize, c: usize) -> usize {
        let base = (r * self.n + c) * self.n;
        self.f[base..base + self.n]
            .iter()
            .position(|&v| v == 1)
            .expect("proper cell has a symbol")
    }

    fn row_of(&self, c: usize, s: usize) -> usize {
        (0..self.n)
            .find(|&r| self.f[self.idx(r, c, s)] == 1)
            .expect("symbol present in column")
    }

    fn col_of(&self, r: usize, s: usize) -> usize {
        (0..self.n)
            .find(|&c| self.f[self.idx(r, c, s)] == 1)
            .expect("symbol present in row")
    }

    /// Two positions along a line holding 1, for the improper case.
    fn pick_of_two(
        &self,
        rng: &mut ChaCha8Rng,
        mut positions: impl Iterator<Item = usize>,
        at: impl Fn(usize) -> usize,
    ) -> usize {
        let first = positions.by_ref().find(|&p| self.f[at(p)] == 1).unwrap();
        let second = positions.find(|&p| self.f[at(p)] == 1).unwrap();
        if draw_below(rng, 2) == 0 {
            first
        } else {
            second
        }
    }

    /// One move from a proper square; returns the new improper cell if any.
    fn proper_move(&mut self, rng: &mut ChaCha8Rng) -> Option<(usize, usize, usize)> {
        let n = self.n;
        let r = draw_below(rng, n as u64) as usize;
        let c = draw_below(rng, n as u64) as usize;
        let s_cur = self.symbol_at(r, c);
        // Uniform 0-cell of the line: any symbol other than the current one.
        let mut s = draw_below(rng, n as u64 - 1) as usize;
        if s >= s_cur {
            s += 1;
        }
        let r2 = self.row_of(c, s);
        let c2 = self.col_of(r, s);
        self.apply(r, c, s, r2, c2, s_cur)
    }

    /// One move from the improper square with `-1` at `neg`.
    fn improper_move(
        &mut self,
        rng: &mut ChaCha8Rng,
        neg: (usize, usize, usize),
    ) -> Option<(usize, usize, usize)> {
        let n = self.n;
        let (r, c, s) = neg;
        let s2 = self.pick_of_two(rng, 0..n, |p| self.idx(r, c, p));
        let r2 = self.pick_of_two(rng, 0..n, |p| self.idx(p, c, s));
        let c2 = self.pick_of_two(rng, 0..n, |p| self.idx(r, p, s));
        self.apply(r, c, s, r2, c2, s2)
    }

    /// The +/-1 update on the subcube spanned by `(r, r2) x (c, c2) x (s, s2)`.
    fn apply(
        &mut self,
        r: usize,
        c: usize,
        s: usize,
        r2: usize,
        c2: usize,
        s2: usize,
    ) -> Option<(usize, usize, usize)> {
        for (rr, cc, ss, d) in [
            (r, c, s, 1i8),
            (r2, c2, s, 1),
            (r2, c, s2, 1),
            (r, c2, s2, 1),
            (r, c, s2, -1),
            (r2, c, s, -1),
            (r, c2, s, -1),
            (r2, c2, s2, -1),
        ] {
            let i = self.idx(rr, cc, ss);
            self.f[i] += d;
            debug_assert!((-1..=1).contains(&self.f[i]));
        }
        (self.f[self.idx(r2, c2, s2)] == -1).then_some((r2, c2, s2))
    }

    fn into_square(self) -> LatinSquare {
        let n = self.n;
        let mut cells = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                cells.push(self.symbol_at(r, c) as u32 + 1);
            }
        }
        LatinSquare::new(n, cells).expect("walk ends on a proper square")
    }
}

/// Two-class blow-up of `inner` by `classes` (length `2 * inner.order()`).
pub fn blowup(inner: &LatinSquare, classes: &ClassVector) -> Result<LatinSquare, GenError> {
    let m = inner.order();
    let n = classes.len();
    if n != 2 * m {
        return Err(GenError::InnerOrderMismatch { inner: m, expected: n / 2 });
    }
    // Rank of each position among the positions of its class.
    let mut rank = vec![0usize; n];
    let mut next = [0usize; 2];
    for (p, &cl) in classes.classes().iter().enumerate() {
        rank[p] = next[cl as usize];
        next[cl as usize] += 1;
    }
    let mut cells = Vec::with_capacity(n * n);
    for p in 0..n {
        for q in 0..n {
            let shift = if classes.classes()[p] != classes.classes()[q] {
                m as u32
            } else {
                0
            };
            cells.push(inner.get(rank[p], rank[q]) + shift);
        }
    }
    Ok(LatinSquare::new(n, cells).expect("blow-up of a Latin square is Latin"))
}

/// Square families addressable by the CLI and the sweep harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareKind {
    Cyclic,
    Jm,
    ParityBlowup,
    QuadrantBlowup,
}

impl SquareKind {
    pub fn name(self) -> &'static str {
        match self {
            SquareKind::Cyclic => "cyclic",
            SquareKind::Jm => "jm",
            SquareKind::ParityBlowup => "parity-blowup",
            SquareKind::QuadrantBlowup => "quadrant-blowup",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cyclic" => Some(SquareKind::Cyclic),
            "jm" => Some(SquareKind::Jm),
            "parity-blowup" => Some(SquareKind::ParityBlowup),
            "quadrant-blowup" => Some(SquareKind::QuadrantBlowup),
            _ => None,
        }
    }
}

/// Generates a square of the given kind and order. Blow-up kinds build
/// their inner square with a "inner"-labelled sub-seed; `steps` overrides
/// the Jacobson-Matthews default.
pub fn generate(
    kind: SquareKind,
    order: usize,
    seed: u64,
    steps: Option<u64>,
) -> Result<LatinSquare, GenError> {
    match kind {
        SquareKind::Cyclic => {
            if order < 1 {
                return Err(GenError::OrderTooSmall { kind: "cyclic", min: 1, order });
            }
            Ok(gen_cyclic(order))
        }
        SquareKind::Jm => gen_jm(order, seed, steps),
        SquareKind::ParityBlowup => {
            if order < 2 || order % 2 != 0 {
                return Err(GenError::BlowupOrder {
                    kind: "parity",
                    multiple_of: 2,
                    order,
                });
            }
            let inner = inner_square(order / 2, seed, steps)?;
            blowup(&inner, &parity_classes(order / 2))
        }
        SquareKind::QuadrantBlowup => {
            if order < 4 || order % 4 != 0 {
                return Err(GenError::BlowupOrder {
                    kind: "quadrant",
                    multiple_of: 4,
                    order,
                });
            }
            let inner = inner_square(order / 2, seed, steps)?;
            blowup(&inner, &quadrant_classes(order / 2)?)
        }
    }
}

/// Blow-up with a caller-provided inner square.
pub fn blowup_of_kind(
    kind: SquareKind,
    inner: &LatinSquare,
    order: usize,
) -> Result<LatinSquare, GenError> {
    if inner.order() * 2 != order {
        return Err(GenError::InnerOrderMismatch { inner: inner.order(), expected: order / 2 });
    }
    match kind {
        SquareKind::ParityBlowup => blowup(inner, &parity_classes(inner.order())),
        SquareKind::QuadrantBlowup => blowup(inner, &quadrant_classes(inner.order())?),
        _ => unreachable!("only blow-up kinds take an inner square"),
    }
}

fn inner_square(m: usize, seed: u64, steps: Option<u64>) -> Result<LatinSquare, GenError> {
    if m == 1 {
        return Ok(gen_cyclic(1));
    }
    gen_jm(m, derive_seed(seed, "inner"), steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_examples() {
        assert_eq!(gen_cyclic(1).cells(), &[1]);
        assert_eq!(gen_cyclic(3).cells(), &[1, 2, 3, 2, 3, 1, 3, 1, 2]);
    }

    #[test]
    fn jm_is_latin_and_deterministic() {
        for n in [2usize, 5, 8] {
            let a = gen_jm(n, 11, Some(2000)).unwrap();
            let b = gen_jm(n, 11, Some(2000)).unwrap();
            assert_eq!(a, b);
            assert!(LatinSquare::new(n, a.cells().to_vec()).is_ok());
        }
        let a = gen_jm(8, 11, Some(2000)).unwrap();
        let c = gen_jm(8, 12, Some(2000)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn jm_rejects_tiny_orders() {
        assert!(matches!(gen_jm(1, 0, None), Err(GenError::OrderTooSmall { .. })));
    }

    #[test]
    fn blowup_hand_examples() {
        let m1 = gen_cyclic(1);
        let c = ClassVector::new(vec![0, 1]).unwrap();
        assert_eq!(blowup(&m1, &c).unwrap().cells(), &[1, 2, 2, 1]);

        let m2 = LatinSquare::from_grid(&[vec![1, 2], vec![2, 1]]).unwrap();
        let c = ClassVector::new(vec![0, 1, 1, 0]).unwrap();
        let l = blowup(&m2, &c).unwrap();
        assert_eq!(
            l.cells(),
            &[1, 3, 4, 2, 3, 1, 2, 4, 4, 2, 1, 3, 2, 4, 3, 1]
        );
    }

    #[test]
    fn blowup_class_rule() {
        // Value <= m exactly when the row and column classes agree.
        let inner = gen_jm(4, 3, Some(5000)).unwrap();
        let classes = parity_classes(4);
        let l = blowup(&inner, &classes).unwrap();
        for p in 0..8 {
            for q in 0..8 {
                let same = classes.classes()[p] == classes.classes()[q];
                assert_eq!(l.get(p, q) <= 4, same);
            }
        }
    }

    #[test]
    fn class_vector_examples() {
        assert_eq!(parity_classes(2).classes(), &[0, 1, 0, 1]);
        assert_eq!(quadrant_classes(2).unwrap().classes(), &[0, 1, 1, 0]);
        assert_eq!(
            quadrant_classes(4).unwrap().classes(),
            &[0, 0, 1, 1, 1, 1, 0, 0]
        );
        assert!(matches!(
            quadrant_classes(3),
            Err(GenError::QuadrantLengthNotDivisibleBy4(6))
        ));
        assert!(ClassVector::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn generate_dispatch() {
        assert_eq!(generate(SquareKind::Cyclic, 3, 0, None).unwrap(), gen_cyclic(3));
        let b = generate(SquareKind::ParityBlowup, 8, 5, Some(4000)).unwrap();
        assert_eq!(b.order(), 8);
        assert!(matches!(
            generate(SquareKind::ParityBlowup, 7, 0, None),
            Err(GenError::BlowupOrder { .. })
        ));
        assert!(matches!(
            generate(SquareKind::QuadrantBlowup, 6, 0, None),
            Err(GenError::BlowupOrder { .. })
        ));
    }
}
