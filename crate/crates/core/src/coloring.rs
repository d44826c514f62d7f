//! Leaf colorings of complete trees and their flat serialized form.

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::tree::{leaf_path, TreeShape};

/// Colors are tracked as bits of a `u64`.
pub const MAX_COLORS: usize = 64;

/// A total map from the leaves of `T(h, i)` to the colors `0..j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ColoringRecord", try_from = "ColoringRecord")]
pub struct Coloring {
    shape: TreeShape,
    colors: usize,
    leaf_colors: Vec<u8>,
}

/// Serialized coloring: `{i, h, j, leaves}` with `leaves` in leaf order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringRecord {
    pub i: usize,
    pub h: usize,
    pub j: usize,
    pub leaves: Vec<usize>,
}

impl From<Coloring> for ColoringRecord {
    fn from(c: Coloring) -> Self {
        ColoringRecord {
            i: c.shape.branching(),
            h: c.shape.depth(),
            j: c.colors,
            leaves: c.leaf_colors.iter().map(|&x| x as usize).collect(),
        }
    }
}

impl TryFrom<ColoringRecord> for Coloring {
    type Error = EngineError;

    fn try_from(r: ColoringRecord) -> Result<Self> {
        let shape = TreeShape::new(r.i, r.h)?;
        Coloring::new(shape, r.j, r.leaves)
    }
}

impl Coloring {
    pub fn new(shape: TreeShape, colors: usize, leaves: Vec<usize>) -> Result<Self> {
        if colors == 0 || colors > MAX_COLORS {
            return Err(EngineError::InvalidColoring(format!(
                "color count {colors} not in 1..={MAX_COLORS}"
            )));
        }
        if leaves.len() != shape.leaf_count() {
            return Err(EngineError::InvalidColoring(format!(
                "{} leaf colors given, T({},{}) has {} leaves",
                leaves.len(),
                shape.depth(),
                shape.branching(),
                shape.leaf_count()
            )));
        }
        if let Some((at, &c)) = leaves.iter().enumerate().find(|(_, &c)| c >= colors) {
            return Err(EngineError::InvalidColoring(format!(
                "leaf {at} has color {c}, only {colors} colors allowed"
            )));
        }
        Ok(Coloring {
            shape,
            colors,
            leaf_colors: leaves.into_iter().map(|c| c as u8).collect(),
        })
    }

    /// Colors every leaf by `f(path digits)`.
    pub fn from_fn(
        shape: TreeShape,
        colors: usize,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Result<Self> {
        let leaves = (0..shape.leaf_count())
            .map(|index| leaf_path(&shape, index).map(|p| f(p.digits())))
            .collect::<Result<Vec<_>>>()?;
        Coloring::new(shape, colors, leaves)
    }

    pub fn constant(shape: TreeShape, colors: usize, color: usize) -> Result<Self> {
        Coloring::new(shape, colors, vec![color; shape.leaf_count()])
    }

    pub fn shape(&self) -> &TreeShape {
        &self.shape
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn leaf_colors(&self) -> &[u8] {
        &self.leaf_colors
    }

    pub fn color_of(&self, leaf: usize) -> usize {
        self.leaf_colors[leaf] as usize
    }

    /// Distinct colors actually used.
    pub fn used_colors(&self) -> usize {
        self.leaf_colors
            .iter()
            .fold(0u64, |acc, &c| acc | 1 << c)
            .count_ones() as usize
    }

    /// Renames colors in order of first appearance, so equal-up-to-renaming
    /// colorings share one representative.
    pub fn canonical(&self) -> Coloring {
        let mut map = [u8::MAX; MAX_COLORS];
        let mut next = 0u8;
        let leaf_colors = self
            .leaf_colors
            .iter()
            .map(|&c| {
                if map[c as usize] == u8::MAX {
                    map[c as usize] = next;
                    next += 1;
                }
                map[c as usize]
            })
            .collect();
        Coloring {
            shape: self.shape,
            colors: self.colors,
            leaf_colors,
        }
    }

    pub fn to_record(&self) -> ColoringRecord {
        self.clone().into()
    }
}

/// Leaf coloring of the digit-sum modulo `modulus`.
pub fn digit_sum_coloring(shape: TreeShape, modulus: usize) -> Result<Coloring> {
    Coloring::from_fn(shape, modulus, |digits| {
        digits.iter().sum::<usize>() % modulus
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_lengths_and_colors() {
        let shape = TreeShape::new(2, 2).unwrap();
        assert!(Coloring::new(shape, 2, vec![0, 1, 0]).is_err());
        assert!(Coloring::new(shape, 2, vec![0, 1, 2, 0]).is_err());
        assert!(Coloring::new(shape, 0, vec![0; 4]).is_err());
        assert!(Coloring::new(shape, 2, vec![0, 1, 1, 0]).is_ok());
    }

    #[test]
    fn record_round_trip() {
        let c = digit_sum_coloring(TreeShape::new(3, 2).unwrap(), 5).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"i":3,"h":2,"j":5,"leaves":[0,1,2,1,2,3,2,3,4]}"#);
        let back: Coloring = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Coloring>(r#"{"i":3,"h":2,"j":5,"leaves":[0,1]}"#).is_err());
    }

    #[test]
    fn canonical_renaming() {
        let shape = TreeShape::new(2, 2).unwrap();
        let c = Coloring::new(shape, 3, vec![2, 0, 2, 1]).unwrap();
        assert_eq!(c.canonical().leaf_colors(), &[0, 1, 0, 2]);
        assert_eq!(c.used_colors(), 3);
    }
}
