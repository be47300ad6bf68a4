use std::sync::OnceLock;

use super::{MAX_BLADES, MAX_DIM, MIN_DIM};

/// Precomputed blade bookkeeping for one dimension: index/bitmask maps and the
/// full `2^n x 2^n` product table of target blade and sign.
pub struct BladeTable {
    n: usize,
    masks: Vec<u32>,
    index_of: Vec<usize>,
    product_index: Vec<u8>,
    product_sign: Vec<f64>,
    reverse_sign: Vec<f64>,
}

static TABLES: OnceLock<Vec<BladeTable>> = OnceLock::new();

/// Sign picked up when the product `e_A e_B` of two sorted blades is brought
/// into canonical order, with every repeated generator contributing `e_i^2 = -1`.
fn blade_product_sign(a: u32, b: u32) -> f64 {
    let mut swaps = 0u32;
    let mut shifted = a >> 1;
    while shifted != 0 {
        swaps += (shifted & b).count_ones();
        shifted >>= 1;
    }
    swaps += (a & b).count_ones();
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl BladeTable {
    fn build(n: usize) -> Self {
        let d = 1usize << n;
        let mut masks: Vec<u32> = (0..d as u32).collect();
        // graded, then lexicographic in the sorted generator list
        masks.sort_by_key(|&m| {
            let gens: Vec<u32> = (0..n as u32).filter(|b| m & (1 << b) != 0).collect();
            (m.count_ones(), gens)
        });
        let mut index_of = vec![0usize; d];
        for (i, &m) in masks.iter().enumerate() {
            index_of[m as usize] = i;
        }
        let mut product_index = vec![0u8; d * d];
        let mut product_sign = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                let (a, b) = (masks[i], masks[j]);
                product_index[i * d + j] = index_of[(a ^ b) as usize] as u8;
                product_sign[i * d + j] = blade_product_sign(a, b);
            }
        }
        let reverse_sign = masks
            .iter()
            .map(|m| {
                let r = m.count_ones();
                // (-1)^r from the involution times (-1)^{r(r-1)/2} from reordering
                let e = r + r * r.saturating_sub(1) / 2;
                if e % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        Self {
            n,
            masks,
            index_of,
            product_index,
            product_sign,
            reverse_sign,
        }
    }

    /// Table for dimension `n` (built once for all supported dimensions).
    pub fn get(n: usize) -> &'static BladeTable {
        assert!((MIN_DIM..=MAX_DIM).contains(&n), "unsupported dimension {n}");
        let tables = TABLES.get_or_init(|| (0..=MAX_DIM).map(Self::build).collect());
        &tables[n]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    #[inline]
    pub fn mask(&self, index: usize) -> u32 {
        self.masks[index]
    }

    #[inline]
    pub fn index_of_mask(&self, mask: u32) -> usize {
        self.index_of[mask as usize]
    }

    #[inline]
    pub fn grade(&self, index: usize) -> usize {
        self.masks[index].count_ones() as usize
    }

    /// `e_i e_j = sign * e_k`, returned as `(k, sign)`.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> (usize, f64) {
        let d = self.len();
        (self.product_index[i * d + j] as usize, self.product_sign[i * d + j])
    }

    #[inline]
    pub fn reverse_sign(&self, index: usize) -> f64 {
        self.reverse_sign[index]
    }

    pub fn blade_name(&self, index: usize) -> String {
        let m = self.masks[index];
        if m == 0 {
            return "1".to_string();
        }
        let mut s = String::from("e");
        for b in 0..self.n {
            if m & (1 << b) != 0 {
                s.push_str(&(b + 1).to_string());
            }
        }
        s
    }

    /// Indices of the grade-1 blades in generator order `e_1..e_n`.
    pub fn vector_indices(&self) -> [usize; MAX_DIM] {
        let mut out = [0; MAX_DIM];
        for (j, slot) in out.iter_mut().enumerate().take(self.n) {
            *slot = self.index_of_mask(1 << j);
        }
        out
    }
}

const _: () = assert!(MAX_BLADES <= u8::MAX as usize + 1);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reverse_sign_matches_grade_pattern() {
        // grades 0..3 give +, -, -, +
        let t = BladeTable::get(3);
        let signs: Vec<f64> = (0..8).map(|i| t.reverse_sign(i)).collect();
        assert_eq!(signs, [1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn vectors_are_grade_one_in_order() {
        let t = BladeTable::get(4);
        assert_eq!(&t.vector_indices()[..4], &[1, 2, 3, 4]);
    }
}
