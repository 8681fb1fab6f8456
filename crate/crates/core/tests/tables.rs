mod common;

use qtopo::riverword::{self, BinaryWord, Necklace};
use qtopo::{classnum, int, reduce, topograph, Surd};

#[test]
fn necklace_rows() {
    let rows = [
        ("01", 5, (1, 3, 1)),
        ("011", 12, (2, 6, 3)),
        ("0011", 8, (1, 4, 2)),
        ("00101", 96, (3, 12, 4)),
        ("01011", 96, (5, 14, 5)),
    ];
    for (s, d, (a, b, c)) in rows {
        let q = riverword::topograph_of_necklace(&s.parse::<Necklace>().unwrap());
        assert_eq!(q.discriminant(), int(d), "{s}");
        assert_eq!(riverword::least_z_form(&q).unwrap(), common::f(a, b, c), "{s}");
    }
}

#[test]
fn word_rows() {
    let rows = [("none", 1, (0, 1, 1)), ("{}", 4, (0, 2, 1)), ("01", 25, (0, 5, 2)), ("010", 64, (0, 8, 3))];
    for (s, d, (a, b, c)) in rows {
        let q = riverword::topograph_of_word(&s.parse::<BinaryWord>().unwrap());
        assert_eq!(q.discriminant(), int(d), "{s}");
        assert_eq!(reduce::reduce_square(&q).unwrap().canonical_form(), &common::f(a, b, c), "{s}");
    }
}

#[test]
fn discriminant_148() {
    let p = riverword::pell_fundamental(&int(148)).unwrap();
    assert_eq!(p.epsilon(), Surd::new(int(146), int(12), int(2), int(148)).unwrap());
    assert_eq!(classnum::h_pos(&int(148)).unwrap(), int(3));
    let half = riverword::negative_pell(&int(148)).unwrap().unwrap();
    assert_eq!((half.t.clone(), half.u.clone()), (int(12), int(1)));
    assert_eq!(half.epsilon().pow(2), p.epsilon());
}

#[test]
fn discriminant_145_has_negative_pell() {
    let s = riverword::negative_pell(&int(145)).unwrap().unwrap();
    assert_eq!((s.t.clone(), s.u.clone()), (int(24), int(2)));
    let p = riverword::pell_fundamental(&int(145)).unwrap();
    assert_eq!(s.epsilon().pow(2), p.epsilon());
}

#[test]
fn lake_river_lengths() {
    let r = topograph::lake_river(&int(18), &int(7));
    assert_eq!(r.edges.len(), 6);
    assert!(!r.word_string().is_empty());
}
