//! A square substitution whose expansion is not a similarity and whose
//! tilings are not linearly recurrent: the Thue–Morse substitution with
//! zero padding above and below. Each letter maps to a 2-wide, 3-tall
//! block whose middle row is the Thue–Morse image and whose other rows
//! are all 0.

use crate::{Error, Result};

/// τ: 0 ↦ 01, 1 ↦ 10.
pub fn thue_morse_step(word: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(word.len() * 2);
    for &c in word {
        match c {
            0 => out.extend_from_slice(&[0, 1]),
            _ => out.extend_from_slice(&[1, 0]),
        }
    }
    out
}

/// τⁿ(0).
pub fn thue_morse(n: u32) -> Vec<u8> {
    let mut w = vec![0u8];
    for _ in 0..n {
        w = thue_morse_step(&w);
    }
    w
}

/// Row-major 2D array of 0/1 cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<u8>,
}

impl Grid {
    pub fn row(&self, y: usize) -> &[u8] {
        &self.cells[y * self.width..(y + 1) * self.width]
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.cells[y * self.width + x]
    }
}

/// The 2-letter block map: letter → 2×3 block, middle row = τ(letter),
/// top and bottom rows all 0. Rows are indexed bottom to top.
#[derive(Clone, Copy, Debug, Default)]
pub struct SolomyakRule;

impl SolomyakRule {
    /// One substitution step on a grid: each cell becomes a 2×3 block.
    pub fn step(&self, g: &Grid) -> Grid {
        let width = g.width * 2;
        let height = g.height * 3;
        let mut cells = vec![0u8; width * height];
        for y in 0..g.height {
            for x in 0..g.width {
                let image = match g.get(x, y) {
                    0 => [0u8, 1],
                    _ => [1u8, 0],
                };
                // middle row of the 3-row band
                let ty = 3 * y + 1;
                cells[ty * width + 2 * x] = image[0];
                cells[ty * width + 2 * x + 1] = image[1];
            }
        }
        Grid {
            width,
            height,
            cells,
        }
    }
}

/// σⁿ applied to an all-zero row of the given width; the result has
/// dimensions (2ⁿ·width) × 3ⁿ.
pub fn solomyak_iterate(n: u32, seed_row_width: usize) -> Result<Grid> {
    if seed_row_width == 0 {
        return Err(Error::PreconditionViolated("empty seed row".into()));
    }
    let mut g = Grid {
        width: seed_row_width,
        height: 1,
        cells: vec![0u8; seed_row_width],
    };
    let rule = SolomyakRule;
    for _ in 0..n {
        if g.width.checked_mul(2).is_none() || g.cells.len() > 200_000_000 / 6 {
            return Err(Error::ResourceLimit("grid too large".into()));
        }
        g = rule.step(&g);
    }
    Ok(g)
}

/// Does `needle` occur in the periodic repetition of `word`?
pub fn factor_of_power(needle: &[u8], word: &[u8]) -> bool {
    if needle.is_empty() {
        return true;
    }
    // enough copies to cover every phase
    let copies = needle.len() / word.len() + 2;
    let mut big = Vec::with_capacity(word.len() * copies);
    for _ in 0..copies {
        big.extend_from_slice(word);
    }
    big.windows(needle.len()).any(|w| w == needle)
}

/// Report of the non-linear-recurrence witness for one n.
#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub n: u32,
    /// |τ^{n+1}(0)| = 2^{n+1}: the diameter of the missing pattern.
    pub pattern_len: usize,
    /// The all-zero region is 3ⁿ×3ⁿ; the rectangle checked is 6ⁿ×3ⁿ.
    pub zero_region: usize,
    pub grid_width: usize,
    pub grid_height: usize,
}

/// Verifies for a single n that τ^{n+1}(0) is not a factor of (τⁿ(0))^ω
/// and (for the 2D part) not a horizontal factor of σⁿ(0^{3ⁿ}).
/// `check_2d` controls whether the grid search runs (3ⁿ sized — keep n
/// small).
pub fn non_lr_witness(n: u32, check_2d: bool) -> Result<WitnessReport> {
    let tn = thue_morse(n);
    let tn1 = thue_morse(n + 1);
    if factor_of_power(&tn1, &tn) {
        return Err(Error::ClaimFalsified(format!(
            "τ^{}(0) occurs in (τ^{}(0))^ω",
            n + 1,
            n
        )));
    }
    let mut report = WitnessReport {
        n,
        pattern_len: tn1.len(),
        zero_region: 3usize.pow(n),
        grid_width: 0,
        grid_height: 0,
    };
    if check_2d {
        let seed = 3usize.pow(n);
        let g = solomyak_iterate(n, seed)?;
        if g.width != 2usize.pow(n) * seed || g.height != 3usize.pow(n) {
            return Err(Error::ClaimFalsified(format!(
                "σ^{n}(0^{seed}) has size {}×{}, expected {}×{}",
                g.width,
                g.height,
                2usize.pow(n) * seed,
                3usize.pow(n)
            )));
        }
        for y in 0..g.height {
            let row = g.row(y);
            if row.windows(tn1.len()).any(|w| w == &tn1[..]) {
                return Err(Error::ClaimFalsified(format!(
                    "τ^{}(0) occurs in row {y} of σ^{n}(0^{seed})",
                    n + 1
                )));
            }
        }
        report.grid_width = g.width;
        report.grid_height = g.height;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thue_morse_words() {
        assert_eq!(thue_morse(0), vec![0]);
        assert_eq!(thue_morse(1), vec![0, 1]);
        assert_eq!(thue_morse(2), vec![0, 1, 1, 0]);
        assert_eq!(thue_morse(3), vec![0, 1, 1, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn block_sizes() {
        // σ¹(0) is 2×3 with middle row 01
        let g = solomyak_iterate(1, 1).unwrap();
        assert_eq!((g.width, g.height), (2, 3));
        assert_eq!(g.row(0), &[0, 0]);
        assert_eq!(g.row(1), &[0, 1]);
        assert_eq!(g.row(2), &[0, 0]);
        // σⁿ(0) has size 2ⁿ×3ⁿ
        for n in 0..5u32 {
            let g = solomyak_iterate(n, 1).unwrap();
            assert_eq!((g.width, g.height), (2usize.pow(n), 3usize.pow(n)));
        }
        // σⁿ(0^{3ⁿ}) has size 6ⁿ×3ⁿ
        for n in 0..4u32 {
            let g = solomyak_iterate(n, 3usize.pow(n)).unwrap();
            assert_eq!((g.width, g.height), (6usize.pow(n), 3usize.pow(n)));
        }
    }

    #[test]
    fn centre_row_is_thue_morse_and_top_line_is_zero() {
        let g = solomyak_iterate(3, 1).unwrap();
        let mid = (g.height - 1) / 2;
        assert_eq!(g.row(mid), &thue_morse(3)[..]);
        // 0^k is legal: it appears in the topmost line
        assert!(g.row(g.height - 1).iter().all(|&c| c == 0));
        assert!(g.row(0).iter().all(|&c| c == 0));
    }

    #[test]
    fn small_witnesses_by_direct_search() {
        // n=1: 0110 not a factor of (01)^ω
        assert!(!factor_of_power(&[0, 1, 1, 0], &[0, 1]));
        // n=2: 01101001 not a factor of (0110)^ω
        assert!(!factor_of_power(&thue_morse(3), &thue_morse(2)));
        // positive control
        assert!(factor_of_power(&[1, 0, 0], &[0, 1, 0]));
    }

    #[test]
    fn witness_holds() {
        for n in 0..=6 {
            let r = non_lr_witness(n, n <= 3).unwrap();
            assert_eq!(r.pattern_len, 2usize.pow(n + 1));
        }
    }
}
