//! Finite exterior algebra over the odd generators of one or several
//! supermatrices, Berezin integration, and exact checks of the sign and
//! determinant identities of the supersymmetric calculus.

pub mod algebra;
pub mod coeff;
pub mod index;
pub mod poly;
pub mod report;
pub mod signs;

pub use algebra::{merge_sign, Block, GElem, GeneratorId, Universe};
pub use coeff::{Coeff, GaussQ};
pub use index::{all_pairs, all_tuples, card, class_pairs, elements, full_set, subset, tuple_card, unit_tuple, IndexTuplePair, Subset};
pub use poly::{determinant_identity_check, minor, DeterminantIdentity, Poly, DETERMINANT_M_CAP};
pub use report::IdentityReport;
pub use signs::{
    describe, monomial, monomial_l, monomial_paired, ordered_product, pair_sign, pairing_closed_form,
    pairing_exponential, pairing_expansion_check, pairing_product, sgn, sgn2, sgn2_agreement_check, berezin_convention_check,
    sgn2_agreement_check_with, sgn2_berezin_with, sgn2_closed_with, sgn4, SgnFn, PAIRING_COST_CAP,
};
