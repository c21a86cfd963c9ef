/// Work limits. These are configuration, so callers can raise them for
/// bigger machines; the defaults admit a 3^16-entry table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Evaluation steps for brute-force enumerations.
    pub steps: u64,
    /// Entries in a per-field table (log/exp/trace tables, Kloosterman tables).
    pub table_entries: u64,
    /// Lattice points visited when enumerating a dilated polytope box.
    pub box_points: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            steps: 1_000_000_000,
            table_entries: 1 << 26,
            box_points: 100_000_000,
        }
    }
}

impl Budget {
    pub(crate) fn check_steps(&self, what: &'static str, needed: u128) -> crate::Result<()> {
        check(what, needed, self.steps)
    }

    pub(crate) fn check_table(&self, what: &'static str, needed: u128) -> crate::Result<()> {
        check(what, needed, self.table_entries)
    }

    pub(crate) fn check_box(&self, what: &'static str, needed: u128) -> crate::Result<()> {
        check(what, needed, self.box_points)
    }
}

fn check(what: &'static str, needed: u128, limit: u64) -> crate::Result<()> {
    if needed > limit as u128 {
        Err(crate::Error::Budget {
            what,
            needed,
            limit,
        })
    } else {
        Ok(())
    }
}
