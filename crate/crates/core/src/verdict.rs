use std::fmt;

/// Answer to a semi-decidable question under a budget.
///
/// `No` is only produced when a saturated search certifies it; anything
/// the budget could not settle is `Unknown`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W = ()> {
    Yes(W),
    No,
    Unknown,
}

impl<W> Verdict<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown)
    }

    pub fn is_decided(&self) -> bool {
        !self.is_unknown()
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn into_witness(self) -> Option<W> {
        match self {
            Verdict::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Yes(w) => Verdict::Yes(f(w)),
            Verdict::No => Verdict::No,
            Verdict::Unknown => Verdict::Unknown,
        }
    }

    /// Drops the witness.
    pub fn plain(&self) -> Verdict {
        match self {
            Verdict::Yes(_) => Verdict::Yes(()),
            Verdict::No => Verdict::No,
            Verdict::Unknown => Verdict::Unknown,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        }
    }
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Yes(())
        } else {
            Verdict::No
        }
    }

    /// Three-valued conjunction: any `No` wins, then any `Unknown`.
    pub fn all(items: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut unknown = false;
        for v in items {
            match v {
                Verdict::No => return Verdict::No,
                Verdict::Unknown => unknown = true,
                Verdict::Yes(()) => {}
            }
        }
        if unknown {
            Verdict::Unknown
        } else {
            Verdict::Yes(())
        }
    }

    /// `Some(bool)` when decided.
    pub fn decided(&self) -> Option<bool> {
        match self {
            Verdict::Yes(()) => Some(true),
            Verdict::No => Some(false),
            Verdict::Unknown => None,
        }
    }
}

impl<W> fmt::Display for Verdict<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
