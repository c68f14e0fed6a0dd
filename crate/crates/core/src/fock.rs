//! Truncated product Fock basis `{Ψ+, Ψ−} ⊗ {n₁₊, n₁₋, …, n_M₊, n_M₋}`.
//!
//! A basis state is stored as a mixed-radix integer. The electronic label is
//! the most significant digit (`plus` = 0, `minus` = 1), so the two
//! electronic blocks are contiguous halves of the space. Below it sit the
//! `2M` oscillator occupations in radix `cutoff + 1`, mode-major with the
//! `+` chirality before `−`:
//!
//! ```text
//! index = e·(c+1)^(2M) + Σ_k occ[k]·(c+1)^k,    k = 2·mode + chirality
//! ```
//!
//! The electronic basis is the pair of complex diabatic states
//! `Ψ± = Ψ₁ ± iΨ₂`, eigenstates of the electronic angular momentum with
//! eigenvalues ±1.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Result};

/// Electronic diabatic state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Electronic {
    Plus,
    Minus,
}

impl Electronic {
    /// Eigenvalue of the electronic angular momentum.
    pub fn angular_momentum(self) -> i64 {
        match self {
            Electronic::Plus => 1,
            Electronic::Minus => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Electronic::Plus => Electronic::Minus,
            Electronic::Minus => Electronic::Plus,
        }
    }

    fn bit(self) -> usize {
        match self {
            Electronic::Plus => 0,
            Electronic::Minus => 1,
        }
    }
}

/// Pseudorotation sense of a phonon in a degenerate mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    fn offset(self) -> usize {
        match self {
            Chirality::Plus => 0,
            Chirality::Minus => 1,
        }
    }

    /// Nuclear angular momentum carried by one phonon of this chirality.
    ///
    /// A `Ψ+ → Ψ−` hop lowers the electronic angular momentum by 2 and is
    /// accompanied either by creating a `−` phonon or by destroying a `+`
    /// phonon, so total angular momentum is conserved only if `−` phonons
    /// carry `+2` and `+` phonons carry `−2`.
    pub fn angular_momentum(self) -> i64 {
        match self {
            Chirality::Plus => -2,
            Chirality::Minus => 2,
        }
    }
}

/// One basis state: electronic label plus `2M` occupations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub electronic: Electronic,
    /// `occ[2n + s]` is the number of phonons in mode `n` with chirality
    /// `s` (0 for `+`, 1 for `−`).
    pub occ: Vec<u32>,
}

impl BasisLabel {
    pub fn vacuum(electronic: Electronic, modes: usize) -> Self {
        BasisLabel {
            electronic,
            occ: vec![0; 2 * modes],
        }
    }

    pub fn occupation(&self, mode: usize, chirality: Chirality) -> u32 {
        self.occ[2 * mode + chirality.offset()]
    }

    pub fn with_occupation(mut self, mode: usize, chirality: Chirality, n: u32) -> Self {
        self.occ[2 * mode + chirality.offset()] = n;
        self
    }

    /// Total angular momentum `ℓ_e + Σ_n ℓ_n` of this state.
    pub fn total_angular_momentum(&self) -> i64 {
        let nuclear: i64 = self
            .occ
            .chunks_exact(2)
            .map(|pair| {
                pair[0] as i64 * Chirality::Plus.angular_momentum()
                    + pair[1] as i64 * Chirality::Minus.angular_momentum()
            })
            .sum();
        self.electronic.angular_momentum() + nuclear
    }
}

/// Truncated product basis for `modes` doubly degenerate vibrational modes,
/// each chiral oscillator holding at most `cutoff` phonons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    modes: usize,
    cutoff: u32,
    radix: usize,
    block: usize,
    dim: usize,
}

impl FockBasis {
    pub fn new(modes: usize, cutoff: u32) -> Result<Self> {
        if modes == 0 {
            return Err(domain("basis needs at least one mode"));
        }
        let radix = cutoff as usize + 1;
        let block = u32::try_from(2 * modes)
            .ok()
            .and_then(|exp| radix.checked_pow(exp))
            .filter(|b| b.checked_mul(2).is_some_and(|d| d <= u32::MAX as usize))
            .ok_or_else(|| {
                domain(format!(
                    "basis with {modes} modes and cutoff {cutoff} is too large to index"
                ))
            })?;
        Ok(FockBasis {
            modes,
            cutoff,
            radix,
            block,
            dim: 2 * block,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Size of one electronic block, `(cutoff + 1)^(2M)`.
    pub fn block_size(&self) -> usize {
        self.block
    }

    /// Index increment produced by adding one phonon to the given oscillator.
    pub fn stride(&self, mode: usize, chirality: Chirality) -> usize {
        self.radix.pow((2 * mode + chirality.offset()) as u32)
    }

    pub fn electronic_of(&self, index: usize) -> Electronic {
        if index < self.block {
            Electronic::Plus
        } else {
            Electronic::Minus
        }
    }

    /// Occupation of one oscillator in the state at `index` (no range check).
    pub fn occupation_of(&self, index: usize, mode: usize, chirality: Chirality) -> u32 {
        ((index / self.stride(mode, chirality)) % self.radix) as u32
    }

    /// Fills `occ` with the `2M` occupations of `index` and returns its
    /// electronic label. `occ` must have length `2M`.
    pub fn decode_into(&self, index: usize, occ: &mut [u32]) -> Electronic {
        let mut rest = index % self.block;
        for slot in occ.iter_mut() {
            *slot = (rest % self.radix) as u32;
            rest /= self.radix;
        }
        self.electronic_of(index)
    }

    pub fn index_of(&self, label: &BasisLabel) -> Result<usize> {
        if label.occ.len() != 2 * self.modes {
            return Err(domain(format!(
                "label has {} occupations, basis expects {}",
                label.occ.len(),
                2 * self.modes
            )));
        }
        let mut index = 0usize;
        for &n in label.occ.iter().rev() {
            if n > self.cutoff {
                return Err(domain(format!(
                    "occupation {n} exceeds cutoff {}",
                    self.cutoff
                )));
            }
            index = index * self.radix + n as usize;
        }
        Ok(label.electronic.bit() * self.block + index)
    }

    pub fn label_of(&self, index: usize) -> Result<BasisLabel> {
        if index >= self.dim {
            return Err(domain(format!(
                "index {index} out of range for dimension {}",
                self.dim
            )));
        }
        let mut occ = vec![0; 2 * self.modes];
        let electronic = self.decode_into(index, &mut occ);
        Ok(BasisLabel { electronic, occ })
    }

    /// Total angular momentum of the basis state at `index`.
    pub fn total_angular_momentum_of(&self, index: usize) -> i64 {
        let mut rest = index % self.block;
        let mut total = self.electronic_of(index).angular_momentum();
        for _ in 0..self.modes {
            total += (rest % self.radix) as i64 * Chirality::Plus.angular_momentum();
            rest /= self.radix;
            total += (rest % self.radix) as i64 * Chirality::Minus.angular_momentum();
            rest /= self.radix;
        }
        total
    }

    /// Sorted indices of every basis state with total angular momentum
    /// `l_total`.
    pub fn sector_indices(&self, l_total: i64) -> Vec<usize> {
        (0..self.dim)
            .filter(|&i| self.total_angular_momentum_of(i) == l_total)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;
    use proptest::prelude::*;

    #[test]
    fn full_size_dimension() {
        let basis = FockBasis::new(3, 7).unwrap();
        assert_eq!(basis.dim(), 524_288);
        assert_eq!(basis.dim(), 1 << 19);
    }

    #[test]
    fn index_examples() {
        let basis = FockBasis::new(3, 7).unwrap();
        let vac = BasisLabel::vacuum(Electronic::Plus, 3);
        assert_eq!(basis.index_of(&vac).unwrap(), 0);
        let minus = BasisLabel::vacuum(Electronic::Minus, 3);
        assert_eq!(basis.index_of(&minus).unwrap(), 262_144);
        let one = vac.clone().with_occupation(0, Chirality::Plus, 1);
        assert_eq!(basis.index_of(&one).unwrap(), 1);

        assert_eq!(basis.label_of(0).unwrap(), vac);
        assert_eq!(basis.label_of(262_144).unwrap(), minus);
        let label = basis.label_of(12345).unwrap();
        assert_eq!(basis.index_of(&label).unwrap(), 12345);
    }

    #[test]
    fn rejects_bad_input() {
        let basis = FockBasis::new(3, 7).unwrap();
        let bad = BasisLabel::vacuum(Electronic::Plus, 3).with_occupation(2, Chirality::Minus, 8);
        assert!(basis.index_of(&bad).is_err());
        assert!(basis.index_of(&BasisLabel::vacuum(Electronic::Plus, 2)).is_err());
        assert!(basis.label_of(basis.dim()).is_err());
        assert!(FockBasis::new(0, 3).is_err());
        assert!(FockBasis::new(40, 7).is_err());
    }

    #[test]
    fn sector_examples() {
        let trivial = FockBasis::new(3, 0).unwrap();
        assert_eq!(trivial.sector_indices(1), vec![0]);

        // Brute-force enumeration of all 8 states of one mode with cutoff 1.
        let basis = FockBasis::new(1, 1).unwrap();
        let mut expected = Vec::new();
        for e in [Electronic::Plus, Electronic::Minus] {
            for np in 0..=1u32 {
                for nm in 0..=1u32 {
                    let l = e.angular_momentum() - 2 * np as i64 + 2 * nm as i64;
                    if l == 1 {
                        let label = BasisLabel {
                            electronic: e,
                            occ: vec![np, nm],
                        };
                        expected.push(basis.index_of(&label).unwrap());
                    }
                }
            }
        }
        expected.sort_unstable();
        let sector = basis.sector_indices(1);
        assert_eq!(sector, expected);
        // |plus, vac>, |plus, 1+ 1->, |minus, 1->
        assert_eq!(sector.len(), 3);
        let minus_one = BasisLabel::vacuum(Electronic::Minus, 1).with_occupation(0, Chirality::Minus, 1);
        assert!(sector.contains(&basis.index_of(&minus_one).unwrap()));
        assert!(sector.contains(&0));
    }

    #[test]
    fn sectors_partition_the_space() {
        let basis = FockBasis::new(2, 2).unwrap();
        let mut by_sector: BTreeMap<i64, usize> = BTreeMap::new();
        for i in 0..basis.dim() {
            *by_sector.entry(basis.total_angular_momentum_of(i)).or_default() += 1;
        }
        let mut seen = vec![false; basis.dim()];
        let mut total = 0;
        for (&l, &count) in &by_sector {
            let sector = basis.sector_indices(l);
            assert_eq!(sector.len(), count);
            assert!(sector.windows(2).all(|w| w[0] < w[1]));
            for i in sector {
                assert!(!seen[i]);
                seen[i] = true;
            }
            total += count;
        }
        assert_eq!(total, basis.dim());
        assert!(basis.sector_indices(1000).is_empty());
    }

    #[test]
    fn initial_state_in_unit_sector() {
        let basis = FockBasis::new(3, 7).unwrap();
        let label = basis.label_of(0).unwrap();
        assert_eq!(label.total_angular_momentum(), 1);
        assert_eq!(basis.total_angular_momentum_of(0), 1);
    }

    proptest! {
        #[test]
        fn index_label_bijection(modes in 1usize..4, cutoff in 0u32..6, seed in any::<u64>()) {
            let basis = FockBasis::new(modes, cutoff).unwrap();
            let index = (seed % basis.dim() as u64) as usize;
            let label = basis.label_of(index).unwrap();
            prop_assert!(label.occ.iter().all(|&n| n <= cutoff));
            prop_assert_eq!(basis.index_of(&label).unwrap(), index);
            prop_assert_eq!(label.total_angular_momentum(), basis.total_angular_momentum_of(index));
        }
    }
}
