//! Matrix-entry budgets.
//!
//! Differential matrices grow as |G|^(2n+1) (bar complex) and |G|^(2n+3)
//! (Hochschild), so degree caps are enforced up front: a computation that
//! would exceed the budget fails loudly with the required size instead of
//! silently truncating. The `BLOCKCOH_BUDGET` environment variable overrides
//! the defaults with either `N` (both limits) or `N,M` (GF(2), other).

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Maximum dense-equivalent entry count for GF(2) matrices.
    pub gf2_entries: u64,
    /// Maximum dense-equivalent entry count for all other fields.
    pub other_entries: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            gf2_entries: 200_000_000,
            other_entries: 50_000_000,
        }
    }
}

impl Budget {
    /// Default budget, env override applied when present.
    pub fn from_env() -> Budget {
        let mut b = Budget::default();
        if let Ok(val) = std::env::var("BLOCKCOH_BUDGET") {
            if let Some((a, c)) = val.split_once(',') {
                if let (Ok(x), Ok(y)) = (a.trim().parse(), c.trim().parse()) {
                    b.gf2_entries = x;
                    b.other_entries = y;
                }
            } else if let Ok(x) = val.trim().parse::<u64>() {
                b.gf2_entries = x;
                b.other_entries = x;
            }
        }
        b
    }

    pub fn limit_for(&self, field_order: u32) -> u64 {
        if field_order == 2 {
            self.gf2_entries
        } else {
            self.other_entries
        }
    }

    pub fn check(&self, field_order: u32, rows: u64, cols: u64) -> Result<()> {
        let needed = rows.saturating_mul(cols);
        let budget = self.limit_for(field_order);
        if needed > budget {
            Err(Error::BudgetExceeded { needed, budget })
        } else {
            Ok(())
        }
    }
}
