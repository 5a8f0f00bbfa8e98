//! Size limits shared by the enumeration and expansion routines.

/// Default cap on the total weight of enumerated trees.
pub const DEFAULT_MAX_TREE_WEIGHT: usize = 10;

/// Default cap on the truncation order of tree expansions.
pub const DEFAULT_MAX_TRUNCATION: usize = 8;

/// Largest vertex count accepted by the brute-force automorphism counter.
pub const BRUTE_FORCE_VERTEX_LIMIT: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_tree_weight: usize,
    pub max_truncation: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_tree_weight: DEFAULT_MAX_TREE_WEIGHT,
            max_truncation: DEFAULT_MAX_TRUNCATION,
        }
    }
}

impl Limits {
    pub fn check_truncation(&self, order: usize) -> crate::Result<()> {
        if order > self.max_truncation {
            return Err(crate::Error::TruncationCapExceeded {
                requested: order,
                cap: self.max_truncation,
            });
        }
        Ok(())
    }

    pub fn check_tree_weight(&self, weight: usize) -> crate::Result<()> {
        if weight > self.max_tree_weight {
            return Err(crate::Error::WeightCapExceeded {
                requested: weight,
                cap: self.max_tree_weight,
            });
        }
        Ok(())
    }
}
