mod common;

use num_traits::ToPrimitive;
use qtopo::{classnum, int, riverword};

#[test]
fn class_numbers_match_reduced_form_counts() {
    for d in -3000i64..0 {
        if common::is_disc(d) {
            let h = classnum::h_neg(&int(d)).unwrap();
            assert_eq!(h.to_usize(), Some(common::brute_reduced_neg(d).len()), "D={d}");
        }
    }
}

#[test]
fn weighted_class_numbers() {
    assert_eq!(classnum::hstar_neg(&int(-12)).unwrap(), int(2));
    assert_eq!(classnum::hurwitz(&int(3)).unwrap().to_f64(), Some(1.0 / 3.0));
    assert_eq!(classnum::hurwitz(&int(4)).unwrap().to_f64(), Some(0.5));
    assert_eq!(classnum::hurwitz(&int(20)).unwrap().to_f64(), Some(2.0));
}

#[test]
fn pell_units_match_continued_fractions() {
    for d in 5i64..=600 {
        if !common::is_disc(d) || common::is_square_i64(d) {
            continue;
        }
        let (t, u, norm) = common::pell_cf(d);
        match riverword::negative_pell(&int(d)).unwrap() {
            Some(s) => assert_eq!((norm, s.t, s.u), (-4, t, u), "D={d}"),
            None => {
                let p = riverword::pell_fundamental(&int(d)).unwrap();
                assert_eq!((norm, p.t, p.u), (4, t, u), "D={d}");
            }
        }
    }
}

#[test]
fn three_square_counts() {
    for n in 1u64..=300 {
        assert_eq!(int(classnum::r3(n)), classnum::r3_via_class(n).unwrap(), "n={n}");
    }
    assert_eq!(classnum::r3(3), 8);
    assert_eq!(classnum::r3(5), 24);
}

#[test]
fn necklace_counts_are_lyndon_counts() {
    for n in 2..=10usize {
        assert_eq!(common::lyndon_words(n).len() as u64, common::lyndon_count(n as u64));
    }
}

#[test]
fn square_class_numbers() {
    for m in 1u64..=60 {
        let (h, h_star) = classnum::h_square(&int(m * m)).unwrap();
        assert_eq!(h, int(classnum::totient(m)));
        assert_eq!(h_star, Some(int(m)));
    }
}
