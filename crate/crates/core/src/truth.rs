//! Kleene strong three-valued connectives.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThreeVal {
    True,
    False,
    Undefined,
}

impl ThreeVal {
    pub const ALL: [ThreeVal; 3] = [ThreeVal::True, ThreeVal::False, ThreeVal::Undefined];

    /// Kleene conjunction: False absorbs, True is the identity.
    pub fn and(self, other: ThreeVal) -> ThreeVal {
        match (self, other) {
            (ThreeVal::False, _) | (_, ThreeVal::False) => ThreeVal::False,
            (ThreeVal::True, ThreeVal::True) => ThreeVal::True,
            _ => ThreeVal::Undefined,
        }
    }

    /// Kleene disjunction.
    pub fn or(self, other: ThreeVal) -> ThreeVal {
        !(!self).and(!other)
    }

    pub fn is_defined(self) -> bool {
        self != ThreeVal::Undefined
    }

    /// Information ordering: Undefined below both True and False.
    pub fn refines(self, earlier: ThreeVal) -> bool {
        earlier == ThreeVal::Undefined || earlier == self
    }
}

impl From<bool> for ThreeVal {
    fn from(b: bool) -> Self {
        if b {
            ThreeVal::True
        } else {
            ThreeVal::False
        }
    }
}

impl fmt::Display for ThreeVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThreeVal::True => "t",
            ThreeVal::False => "f",
            ThreeVal::Undefined => "u",
        })
    }
}

impl std::ops::Not for ThreeVal {
    type Output = ThreeVal;

    fn not(self) -> ThreeVal {
        match self {
            ThreeVal::True => ThreeVal::False,
            ThreeVal::False => ThreeVal::True,
            ThreeVal::Undefined => ThreeVal::Undefined,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::ThreeVal::{self, *};

    #[test]
    fn conjunction_table() {
        // rows/cols: True, False, Undefined
        let table = [
            [True, False, Undefined],
            [False, False, False],
            [Undefined, False, Undefined],
        ];
        for (i, a) in ThreeVal::ALL.iter().enumerate() {
            for (j, b) in ThreeVal::ALL.iter().enumerate() {
                assert_eq!(a.and(*b), table[i][j], "{a} and {b}");
            }
        }
    }

    #[test]
    fn disjunction_is_dual() {
        assert_eq!(True.or(Undefined), True);
        assert_eq!(False.or(Undefined), Undefined);
        assert_eq!(False.or(False), False);
    }
}
