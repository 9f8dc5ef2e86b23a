//! Tagged conclusions and sets of them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::syntax::Literal;
use crate::truth::ThreeVal;

/// The four kinds of conclusion. Declaration order is the canonical output order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    /// `+D`: definitely provable.
    PlusDelta,
    /// `-D`: provably not definitely provable.
    MinusDelta,
    /// `+d`: defeasibly provable.
    PlusPartial,
    /// `-d`: provably not defeasibly provable.
    MinusPartial,
}

impl Tag {
    pub const ALL: [Tag; 4] = [Tag::PlusDelta, Tag::MinusDelta, Tag::PlusPartial, Tag::MinusPartial];

    pub fn ascii(self) -> &'static str {
        match self {
            Tag::PlusDelta => "+D",
            Tag::MinusDelta => "-D",
            Tag::PlusPartial => "+d",
            Tag::MinusPartial => "-d",
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Tag::PlusDelta | Tag::PlusPartial)
    }

    pub fn is_definite(self) -> bool {
        matches!(self, Tag::PlusDelta | Tag::MinusDelta)
    }

    /// The tag with the opposite sign at the same level.
    pub fn opposite(self) -> Tag {
        match self {
            Tag::PlusDelta => Tag::MinusDelta,
            Tag::MinusDelta => Tag::PlusDelta,
            Tag::PlusPartial => Tag::MinusPartial,
            Tag::MinusPartial => Tag::PlusPartial,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.ascii())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTag(pub String);

impl fmt::Display for UnknownTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown tag `{}` (expected +D, -D, +d or -d)", self.0)
    }
}

impl std::error::Error for UnknownTag {}

impl FromStr for Tag {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "+D" | "+Δ" => Tag::PlusDelta,
            "-D" | "−Δ" | "-Δ" => Tag::MinusDelta,
            "+d" | "+∂" => Tag::PlusPartial,
            "-d" | "−∂" | "-∂" => Tag::MinusPartial,
            _ => return Err(UnknownTag(s.to_string())),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaggedConclusion {
    pub tag: Tag,
    pub literal: Literal,
}

impl TaggedConclusion {
    pub fn new(tag: Tag, literal: Literal) -> Self {
        TaggedConclusion { tag, literal }
    }
}

impl fmt::Display for TaggedConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.tag, self.literal)
    }
}

/// A violation of the coherence or containment properties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantViolation {
    /// Both `+X q` and `-X q` are present.
    Incoherent(Tag, Literal),
    /// `+D q` without `+d q`.
    DefiniteNotDefeasible(Literal),
    /// `-d q` without `-D q`.
    RefutedButNotDefinitelyRefuted(Literal),
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantViolation::Incoherent(tag, l) => {
                write!(f, "both {} {l} and {} {l}", tag, tag.opposite())
            }
            InvariantViolation::DefiniteNotDefeasible(l) => write!(f, "+D {l} without +d {l}"),
            InvariantViolation::RefutedButNotDefinitelyRefuted(l) => write!(f, "-d {l} without -D {l}"),
        }
    }
}

/// Tagged conclusions in canonical order: by tag (`+D`, `-D`, `+d`, `-d`), then literal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConclusionSet {
    set: BTreeSet<TaggedConclusion>,
}

impl ConclusionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: TaggedConclusion) -> bool {
        self.set.insert(c)
    }

    /// Inserts whatever conclusions the two three-valued statuses of `lit` determine.
    pub fn insert_statuses(&mut self, lit: &Literal, definite: ThreeVal, defeasible: ThreeVal) {
        let pairs = [
            (definite, Tag::PlusDelta, Tag::MinusDelta),
            (defeasible, Tag::PlusPartial, Tag::MinusPartial),
        ];
        for (v, plus, minus) in pairs {
            match v {
                ThreeVal::True => {
                    self.insert(TaggedConclusion::new(plus, lit.clone()));
                }
                ThreeVal::False => {
                    self.insert(TaggedConclusion::new(minus, lit.clone()));
                }
                ThreeVal::Undefined => {}
            }
        }
    }

    pub fn contains(&self, c: &TaggedConclusion) -> bool {
        self.set.contains(c)
    }

    pub fn has(&self, tag: Tag, lit: &Literal) -> bool {
        self.set.contains(&TaggedConclusion::new(tag, lit.clone()))
    }

    /// Status of `lit` at one level: True for `+`, False for `-`, Undefined if neither.
    pub fn status(&self, lit: &Literal, definite: bool) -> ThreeVal {
        let (plus, minus) = if definite {
            (Tag::PlusDelta, Tag::MinusDelta)
        } else {
            (Tag::PlusPartial, Tag::MinusPartial)
        };
        match (self.has(plus, lit), self.has(minus, lit)) {
            (true, _) => ThreeVal::True,
            (false, true) => ThreeVal::False,
            _ => ThreeVal::Undefined,
        }
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &TaggedConclusion> {
        self.set.iter()
    }

    /// Conclusions present in exactly one of the two sets.
    pub fn symmetric_difference<'a>(&'a self, other: &'a ConclusionSet) -> Vec<TaggedConclusion> {
        self.set.symmetric_difference(&other.set).cloned().collect()
    }

    /// Coherence and containment violations, empty for every well-behaved result.
    pub fn invariant_violations(&self) -> Vec<InvariantViolation> {
        let mut out = Vec::new();
        for c in &self.set {
            let l = &c.literal;
            match c.tag {
                Tag::PlusDelta => {
                    if self.has(Tag::MinusDelta, l) {
                        out.push(InvariantViolation::Incoherent(Tag::PlusDelta, l.clone()));
                    }
                    if !self.has(Tag::PlusPartial, l) {
                        out.push(InvariantViolation::DefiniteNotDefeasible(l.clone()));
                    }
                }
                Tag::PlusPartial => {
                    if self.has(Tag::MinusPartial, l) {
                        out.push(InvariantViolation::Incoherent(Tag::PlusPartial, l.clone()));
                    }
                }
                Tag::MinusPartial => {
                    if !self.has(Tag::MinusDelta, l) {
                        out.push(InvariantViolation::RefutedButNotDefinitelyRefuted(l.clone()));
                    }
                }
                Tag::MinusDelta => {}
            }
        }
        out
    }
}

impl FromIterator<TaggedConclusion> for ConclusionSet {
    fn from_iter<I: IntoIterator<Item = TaggedConclusion>>(iter: I) -> Self {
        ConclusionSet {
            set: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a ConclusionSet {
    type Item = &'a TaggedConclusion;
    type IntoIter = std::collections::btree_set::Iter<'a, TaggedConclusion>;

    fn into_iter(self) -> Self::IntoIter {
        self.set.iter()
    }
}

impl fmt::Display for ConclusionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.set {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tag_round_trip() {
        for t in Tag::ALL {
            assert_eq!(t.ascii().parse::<Tag>().unwrap(), t);
            assert_eq!(t.opposite().opposite(), t);
        }
        assert_eq!("+∂".parse::<Tag>().unwrap(), Tag::PlusPartial);
        assert!("+x".parse::<Tag>().is_err());
    }

    #[test]
    fn canonical_order_is_tag_then_literal() {
        let set: ConclusionSet = [
            TaggedConclusion::new(Tag::MinusPartial, Literal::prop("a")),
            TaggedConclusion::new(Tag::PlusDelta, Literal::prop("~b")),
            TaggedConclusion::new(Tag::PlusDelta, Literal::prop("b")),
        ]
        .into_iter()
        .collect();
        let rendered: Vec<String> = set.iter().map(ToString::to_string).collect();
        assert_eq!(rendered, vec!["+D b", "+D ~b", "-d a"]);
    }

    #[test]
    fn detects_violations() {
        let p = Literal::prop("p");
        let mut set = ConclusionSet::new();
        set.insert_statuses(&p, ThreeVal::True, ThreeVal::Undefined);
        set.insert(TaggedConclusion::new(Tag::MinusDelta, p.clone()));
        let v = set.invariant_violations();
        assert!(v.contains(&InvariantViolation::Incoherent(Tag::PlusDelta, p.clone())));
        assert!(v.contains(&InvariantViolation::DefiniteNotDefeasible(p.clone())));

        let mut set = ConclusionSet::new();
        set.insert_statuses(&p, ThreeVal::Undefined, ThreeVal::False);
        assert_eq!(
            set.invariant_violations(),
            vec![InvariantViolation::RefutedButNotDefinitelyRefuted(p)]
        );
    }
}
