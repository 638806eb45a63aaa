use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::exact::{exact_string, int};
use crate::tree::Tree;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `lhs <= rhs`
    AtMost,
    /// `lhs == rhs`
    Equal,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::Equal => "==",
        }
    }
}

/// Outcome of one exact check. `slack = rhs - lhs`; an inequality holds iff
/// the slack is nonnegative, an identity iff it is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub check: String,
    pub input: String,
    pub relation: Relation,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
    pub slack: BigRational,
    /// Reported-only checks (limit statements, experiments) never count as
    /// failures.
    pub asserted: bool,
}

impl VerificationReport {
    pub fn new(
        check: impl Into<String>,
        input: impl Into<String>,
        relation: Relation,
        lhs: BigRational,
        rhs: BigRational,
    ) -> Self {
        let slack = &rhs - &lhs;
        let holds = match relation {
            Relation::AtMost => !slack.is_negative(),
            Relation::Equal => slack.is_zero(),
        };
        VerificationReport {
            check: check.into(),
            input: input.into(),
            relation,
            lhs,
            rhs,
            holds,
            slack,
            asserted: true,
        }
    }

    pub fn at_most(check: &str, input: &str, lhs: BigRational, rhs: BigRational) -> Self {
        Self::new(check, input, Relation::AtMost, lhs, rhs)
    }

    pub fn equal(check: &str, input: &str, lhs: BigRational, rhs: BigRational) -> Self {
        Self::new(check, input, Relation::Equal, lhs, rhs)
    }

    pub fn at_most_int(check: &str, input: &str, lhs: &BigUint, rhs: &BigUint) -> Self {
        Self::at_most(check, input, int(lhs), int(rhs))
    }

    pub fn reported_only(mut self) -> Self {
        self.asserted = false;
        self
    }

    /// True unless this is an asserted check that fails.
    pub fn passes(&self) -> bool {
        self.holds || !self.asserted
    }
}

impl Serialize for VerificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VerificationReport", 8)?;
        st.serialize_field("check", &self.check)?;
        st.serialize_field("input", &self.input)?;
        st.serialize_field("relation", self.relation.symbol())?;
        st.serialize_field("lhs", &exact_string(&self.lhs))?;
        st.serialize_field("rhs", &exact_string(&self.rhs))?;
        st.serialize_field("holds", &self.holds)?;
        st.serialize_field("slack", &exact_string(&self.slack))?;
        st.serialize_field("asserted", &self.asserted)?;
        st.end()
    }
}

/// Short identity of a tree for report inputs.
pub fn describe(t: &Tree) -> String {
    format!("n={} code={}", t.len(), t.canonical_code())
}
