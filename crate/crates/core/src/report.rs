//! Law-check reports.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A law (or structural requirement) a checker can find violated.
///
/// `Display` renders the failure the way reports print it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Law {
    // ortholattice
    Reflexive,
    Antisymmetric,
    Transitive,
    Bounded,
    MeetExists,
    JoinExists,
    ComplementMeet,
    ComplementJoin,
    OrderInverting,
    Involution,
    DeMorgan,
    // homomorphisms
    BottomPreserved,
    TopPreserved,
    OrthoPreserved,
    MeetPreserved,
    JoinPreserved,
    Injective,
    // quantifiers
    ExistsAdditive,
    ExistsBottom,
    ExistsIdempotent,
    ExistsIncreasing,
    ExistsClosedComplement,
    ExistsMonotone,
    ForallMultiplicative,
    ForallTop,
    ForallIdempotent,
    ForallDecreasing,
    ForallOpenComplement,
    OpenEqualsClosed,
    // sub-algebras
    ClosedUnderMeet,
    ClosedUnderJoin,
    ClosedUnderOrtho,
    ContainsBounds,
    ClosedUnderQuantifier,
    // families
    Commute,
    DiagonalSymmetric,
    DiagonalReflexive,
    DiagonalCylinder,
    LocallyFinite,
    // polyadic
    NablaEmpty,
    NablaUnion,
    SupportEquation,
    SupportMinimal,
    Correspondence,
    // functional
    DiamondComplement,
    DiamondIsNablaAll,
    // completions
    MeetDense,
    JoinDense,
    SubsetMeetPreserved,
    SubsetJoinPreserved,
    // amalgamation
    SquareCommutes,
    Interpolant,
    ChainLink,
    ChainRestriction,
    Stabilization,
    UpperBound,
    LeastUpperBound,
    LowerBound,
    GreatestLowerBound,
    WitnessQuantifier,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Law::*;
        let s = match self {
            Reflexive => "reflexivity fails",
            Antisymmetric => "antisymmetry fails",
            Transitive => "transitivity fails",
            Bounded => "bounded (0 and 1 exist) fails",
            MeetExists => "meet exists fails",
            JoinExists => "join exists fails",
            ComplementMeet => "a ∧ a^⊥ = 0 fails",
            ComplementJoin => "a ∨ a^⊥ = 1 fails",
            OrderInverting => "a ≤ b ⇒ b^⊥ ≤ a^⊥ fails",
            Involution => "a^⊥⊥ = a fails",
            DeMorgan => "(a ∨ b)^⊥ = a^⊥ ∧ b^⊥ fails",
            BottomPreserved => "bottom not preserved",
            TopPreserved => "top not preserved",
            OrthoPreserved => "ortho not preserved",
            MeetPreserved => "meet not preserved",
            JoinPreserved => "join not preserved",
            Injective => "not injective",
            ExistsAdditive => "∃(a∨b) = ∃a ∨ ∃b fails",
            ExistsBottom => "∃0 = 0 fails",
            ExistsIdempotent => "∃∃a = ∃a fails",
            ExistsIncreasing => "a ≤ ∃a fails",
            ExistsClosedComplement => "∃(∃a)^⊥ = (∃a)^⊥ fails",
            ExistsMonotone => "a ≤ b ⇒ ∃a ≤ ∃b fails",
            ForallMultiplicative => "∀(a∧b) = ∀a ∧ ∀b fails",
            ForallTop => "∀1 = 1 fails",
            ForallIdempotent => "∀∀a = ∀a fails",
            ForallDecreasing => "∀a ≤ a fails",
            ForallOpenComplement => "∀(∀a)^⊥ = (∀a)^⊥ fails",
            OpenEqualsClosed => "open elements = closed elements fails",
            ClosedUnderMeet => "closed under meet fails",
            ClosedUnderJoin => "closed under join fails",
            ClosedUnderOrtho => "closed under ortho fails",
            ContainsBounds => "contains 0 and 1 fails",
            ClosedUnderQuantifier => "closed under quantifier fails",
            Commute => "∃_i∃_k a = ∃_k∃_i a fails",
            DiagonalSymmetric => "δ_{i,k}=δ_{k,i} fails",
            DiagonalReflexive => "δ_{i,i}=1 fails",
            DiagonalCylinder => "∃_k(δ_{i,k}∧δ_{k,l})=δ_{i,l} fails",
            LocallyFinite => "S_a cofinite fails",
            NablaEmpty => "∇_∅ a = a fails",
            NablaUnion => "∇_{J∪K} a = ∇_J ∇_K a fails",
            SupportEquation => "∇_{I∖J} a = a fails",
            SupportMinimal => "support minimality fails",
            Correspondence => "∃_j a = ∇_{j} a = ∃̂_j a fails",
            DiamondComplement => "◇−◇f = −◇f fails",
            DiamondIsNablaAll => "◇f = ∇̂_I f fails",
            MeetDense => "meet-dense fails",
            JoinDense => "join-dense fails",
            SubsetMeetPreserved => "subset meet not preserved",
            SubsetJoinPreserved => "subset join not preserved",
            SquareCommutes => "ψ1∘φ1 = ψ2∘φ2 fails",
            Interpolant => "super-amalgamation interpolant missing",
            ChainLink => "h_n = f_n∘h_{n−1} fails",
            ChainRestriction => "h_n = g_n|_B fails",
            Stabilization => "d_m∘g_m(a) = d_n∘g_n(a) fails",
            UpperBound => "d_k∘g_k(∃a) upper bound fails",
            LeastUpperBound => "d_k∘g_k(∃a) least upper bound fails",
            LowerBound => "d_k∘g_k(∀a) lower bound fails",
            GreatestLowerBound => "d_k∘g_k(∀a) greatest lower bound fails",
            WitnessQuantifier => "f(∃a) = ◇f(a) fails",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Sub-structure the violation belongs to (`"∃_i"`, `"psi1"`, `"stage 2"`), empty at top level.
    pub scope: String,
    pub law: Law,
    pub witness: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.scope.is_empty() {
            write!(f, "{}: ", self.scope)?;
        }
        write!(f, "{}\t", self.law)?;
        for (i, w) in self.witness.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(w)?;
        }
        Ok(())
    }
}

/// Outcome of a law check: empty `violations` means pass.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
    /// Free-form facts recorded by the checker (sample counts, computed sets).
    pub notes: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, law: Law, witness: Vec<String>) {
        self.violations.push(Violation {
            scope: String::new(),
            law,
            witness,
        });
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.notes.push((key.into(), value.into()));
    }

    /// Appends `other`, prefixing its scopes with `scope`.
    pub fn absorb(&mut self, scope: &str, other: Report) {
        for mut v in other.violations {
            if !scope.is_empty() {
                v.scope = if v.scope.is_empty() {
                    scope.into()
                } else {
                    alloc::format!("{scope}/{}", v.scope)
                };
            }
            self.violations.push(v);
        }
        self.notes.extend(other.notes);
    }

    pub fn has(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }

    pub fn find(&self, law: Law) -> Option<&Violation> {
        self.violations.iter().find(|v| v.law == law)
    }
}
