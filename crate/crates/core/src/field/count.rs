use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::poly::advance;
use super::{is_irreducible_rabin, is_irreducible_trial, Elem, FieldContext, FieldError, MonicPoly};

/// Default cap on the number of polynomials a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum IrreducibilityTest {
    Trial,
    #[default]
    Rabin,
}

impl IrreducibilityTest {
    pub fn name(self) -> &'static str {
        match self {
            Self::Trial => "trial",
            Self::Rabin => "rabin",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountConfig {
    pub budget: u64,
    pub workers: usize,
    pub test: IrreducibilityTest,
}

impl Default for CountConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            workers: 1,
            test: IrreducibilityTest::default(),
        }
    }
}

impl CountConfig {
    pub(super) fn unlimited() -> Self {
        Self {
            budget: u64::MAX,
            ..Self::default()
        }
    }

    pub fn with_test(mut self, test: IrreducibilityTest) -> Self {
        self.test = test;
        self
    }
}

/// Largest `n` with `q^n <= budget` (0 if even `q` is over budget).
pub fn largest_feasible_degree(q: u64, budget: u64) -> u32 {
    let mut n = 0;
    let mut size = 1u64;
    while let Some(next) = size.checked_mul(q).filter(|&s| s <= budget) {
        size = next;
        n += 1;
    }
    n
}

fn space_size(field: &FieldContext, n: u32, budget: u64) -> Result<u64, FieldError> {
    if n == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let q = field.order();
    match q.checked_pow(n) {
        Some(size) if size <= budget => Ok(size),
        _ => Err(FieldError::BudgetExceeded {
            q,
            n,
            budget,
            largest_feasible: largest_feasible_degree(q, budget),
        }),
    }
}

/// All `q^n` monic polynomials of degree `n`, ordered lexicographically by
/// coefficients read from the constant term upward.
pub fn enumerate_monic<'f>(
    field: &'f FieldContext,
    n: u32,
    config: &CountConfig,
) -> Result<MonicIter<'f>, FieldError> {
    let size = space_size(field, n, config.budget)?;
    Ok(MonicIter::new(field, n, 0..size))
}

/// The polynomials with lexicographic ranks in `range`, for block-wise
/// processing. Ranks past `q^n` are clamped away.
pub fn enumerate_monic_range<'f>(
    field: &'f FieldContext,
    n: u32,
    range: Range<u64>,
    config: &CountConfig,
) -> Result<MonicIter<'f>, FieldError> {
    let size = space_size(field, n, config.budget)?;
    Ok(MonicIter::new(field, n, range.start.min(size)..range.end.min(size)))
}

/// Splits `0..q^n` into at most `blocks` contiguous, disjoint, covering
/// ranges of near-equal length.
pub fn monic_blocks(
    field: &FieldContext,
    n: u32,
    blocks: usize,
    config: &CountConfig,
) -> Result<Vec<Range<u64>>, FieldError> {
    let size = space_size(field, n, config.budget)?;
    let blocks = (blocks.max(1) as u64).min(size);
    Ok((0..blocks)
        .map(|b| (size * b / blocks)..(size * (b + 1) / blocks))
        .collect())
}

pub struct MonicIter<'f> {
    field: &'f FieldContext,
    /// Lower coefficients `c_0..c_{n-1}`; `c_0` is the most significant digit.
    current: Vec<Elem>,
    remaining: u64,
}

impl<'f> MonicIter<'f> {
    fn new(field: &'f FieldContext, n: u32, range: Range<u64>) -> Self {
        let q = field.order();
        let mut current = vec![0; n as usize];
        let mut rank = range.start;
        for c in current.iter_mut().rev() {
            *c = (rank % q) as Elem;
            rank /= q;
        }
        Self {
            field,
            current,
            remaining: range.end.saturating_sub(range.start),
        }
    }

    /// Visits the remaining polynomials as full coefficient slices without
    /// allocating per polynomial.
    fn for_each_slice(mut self, mut visit: impl FnMut(&[Elem])) {
        let q = self.field.order() as u32;
        let mut buf = self.current.clone();
        buf.push(1);
        let n = self.current.len();
        while self.remaining > 0 {
            visit(&buf);
            self.remaining -= 1;
            advance(&mut buf[..n], q);
        }
        self.current.copy_from_slice(&buf[..n]);
    }
}

impl<'f> Iterator for MonicIter<'f> {
    type Item = MonicPoly<'f>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        let mut coeffs = self.current.clone();
        coeffs.push(1);
        self.remaining -= 1;
        advance(&mut self.current, self.field.order() as u32);
        Some(MonicPoly::from_raw(self.field, coeffs))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, usize::try_from(self.remaining).ok())
    }
}

fn count_block(field: &FieldContext, n: u32, range: Range<u64>, test: IrreducibilityTest) -> u64 {
    let mut count = 0;
    MonicIter::new(field, n, range).for_each_slice(|coeffs| {
        let f = MonicPoly::from_raw(field, coeffs.to_vec());
        let irreducible = match test {
            IrreducibilityTest::Trial => is_irreducible_trial(&f),
            IrreducibilityTest::Rabin => is_irreducible_rabin(&f),
        };
        if irreducible.expect("degree >= 1") {
            count += 1;
        }
    });
    count
}

/// Number of monic irreducible polynomials of degree `n` over the field,
/// found by testing every monic polynomial of that degree.
///
/// With `workers > 1` the rank space is split into contiguous blocks that
/// are counted on a dedicated thread pool and summed; the result does not
/// depend on the worker count.
pub fn count_irreducibles(
    field: &FieldContext,
    n: u32,
    config: &CountConfig,
) -> Result<u64, FieldError> {
    if config.workers == 0 {
        return Err(FieldError::Workers("must be at least 1".into()));
    }
    if config.workers == 1 {
        let size = space_size(field, n, config.budget)?;
        return Ok(count_block(field, n, 0..size, config.test));
    }
    let blocks = monic_blocks(field, n, config.workers * 8, config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| FieldError::Workers(e.to_string()))?;
    Ok(pool.install(|| {
        blocks
            .into_par_iter()
            .map(|r| count_block(field, n, r, config.test))
            .sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn enumeration_examples() {
        let f2 = FieldContext::build(2, 1).unwrap();
        let cfg = CountConfig::default();
        let linear: Vec<String> = enumerate_monic(&f2, 1, &cfg)
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(linear, ["x", "x + 1"]);
        assert_eq!(enumerate_monic(&f2, 3, &cfg).unwrap().count(), 8);
        let f4 = FieldContext::build(2, 2).unwrap();
        assert_eq!(enumerate_monic(&f4, 2, &cfg).unwrap().count(), 16);
        assert_eq!(enumerate_monic(&f2, 0, &cfg).err(), Some(FieldError::ZeroDegree));
    }

    #[test]
    fn enumeration_is_distinct_and_ordered() {
        let f3 = FieldContext::build(3, 1).unwrap();
        let polys: Vec<Vec<Elem>> = enumerate_monic(&f3, 4, &CountConfig::default())
            .unwrap()
            .map(MonicPoly::into_coeffs)
            .collect();
        assert_eq!(polys.len(), 81);
        assert_eq!(polys.iter().collect::<HashSet<_>>().len(), 81);
        assert!(polys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn budget_refusal() {
        let f2 = FieldContext::build(2, 1).unwrap();
        let cfg = CountConfig {
            budget: 1000,
            ..CountConfig::default()
        };
        assert_eq!(
            count_irreducibles(&f2, 10, &cfg).err(),
            Some(FieldError::BudgetExceeded {
                q: 2,
                n: 10,
                budget: 1000,
                largest_feasible: 9
            })
        );
        assert!(count_irreducibles(&f2, 9, &cfg).is_ok());
        let msg = enumerate_monic(&f2, 11, &cfg).err().unwrap().to_string();
        assert!(msg.contains("budget of 1000"), "{msg}");
    }

    #[test]
    fn blocks_partition_the_space() {
        let f3 = FieldContext::build(3, 1).unwrap();
        let cfg = CountConfig::default();
        let all: Vec<_> = enumerate_monic(&f3, 5, &cfg).unwrap().collect();
        for blocks in [1, 2, 7, 243, 1000] {
            let ranges = monic_blocks(&f3, 5, blocks, &cfg).unwrap();
            let joined: Vec<_> = ranges
                .into_iter()
                .flat_map(|r| enumerate_monic_range(&f3, 5, r, &cfg).unwrap())
                .collect();
            assert_eq!(joined, all, "blocks = {blocks}");
        }
    }

    #[test]
    fn count_examples() {
        let cfg = CountConfig::default();
        let f2 = FieldContext::build(2, 1).unwrap();
        let f4 = FieldContext::build(2, 2).unwrap();
        for test in [IrreducibilityTest::Trial, IrreducibilityTest::Rabin] {
            let cfg = cfg.clone().with_test(test);
            assert_eq!(count_irreducibles(&f2, 1, &cfg), Ok(2));
            assert_eq!(count_irreducibles(&f2, 4, &cfg), Ok(3));
            assert_eq!(count_irreducibles(&f4, 2, &cfg), Ok(6));
        }
    }

    #[test]
    fn worker_count_does_not_change_counts() {
        let f3 = FieldContext::build(3, 1).unwrap();
        let serial = count_irreducibles(&f3, 6, &CountConfig::default()).unwrap();
        for workers in [2, 3, 8] {
            let cfg = CountConfig {
                workers,
                ..CountConfig::default()
            };
            assert_eq!(count_irreducibles(&f3, 6, &cfg).unwrap(), serial);
        }
        let cfg = CountConfig {
            workers: 0,
            ..CountConfig::default()
        };
        assert!(count_irreducibles(&f3, 2, &cfg).is_err());
    }

    #[test]
    fn feasible_degree() {
        assert_eq!(largest_feasible_degree(2, DEFAULT_BUDGET), 24);
        assert_eq!(largest_feasible_degree(4, DEFAULT_BUDGET), 12);
        assert_eq!(largest_feasible_degree(3, 2), 0);
        assert_eq!(largest_feasible_degree(2, u64::MAX), 63);
    }
}
