use whitney_core::graph::fixtures::{figure1_g, figure1_h};
use whitney_core::order::{tutte_compare, whitney_compare, Verdict, Witness};
use whitney_core::tutte::{self, tutte_expansion};
use whitney_core::BivarPoly;

/// Expected Tutte quotient for figure1_G over figure1_H, term for term.
const REFERENCE_P: &str = "4xy^5 + x^3y^2 + 4x^2y^3 + 12xy^4 + 2x^3y + 13x^2y^2 + 24xy^3 - x^3 \
     + x^2y + 9xy^2 - 8y^3 - 4x^2 - 12xy - 19y^2 - 7x - 15y - 4";

#[test]
fn tutte_quotient_matches_reference_polynomial() {
    let r = tutte_compare(&figure1_g(), &figure1_h()).unwrap();
    assert_eq!(r.verdict, Verdict::NegativeQuotient);
    let expected = BivarPoly::parse(REFERENCE_P).unwrap();
    assert_eq!(expected.len(), 17);
    assert_eq!(r.quotient.as_ref().unwrap(), &expected);
    assert!(matches!(
        r.witness,
        Some(Witness::NegativeCoefficient { .. })
    ));
    assert_eq!(expected.coeff(0, 3), (-8).into());
}

#[test]
fn whitney_order_holds() {
    let r = whitney_compare(&figure1_g(), &figure1_h()).unwrap();
    assert_eq!(r.verdict, Verdict::Dominates);
    let q = r.quotient.unwrap();
    assert!(q.is_nonnegative());
    let one_minus_xy = BivarPoly::parse("1 - xy").unwrap();
    assert_eq!(
        &one_minus_xy * &q,
        tutte::whitney(&figure1_g()) - tutte::whitney(&figure1_h())
    );
}

#[test]
fn engines_agree_on_figure_graphs() {
    for g in [figure1_g(), figure1_h()] {
        assert_eq!(tutte::tutte(&g), tutte_expansion(&g).unwrap());
    }
}
