use causekit::distances::{
    d_ghamm, d_hamm, d_lev, d_pref_ap, hamming, Distance, EditSequence, EditSymbol,
};
use proptest::collection::vec;
use proptest::prelude::*;

fn word() -> impl Strategy<Value = Vec<u8>> {
    vec(0u8..3, 0..8)
}

fn pair_same_len() -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (0usize..8).prop_flat_map(|n| (vec(0u8..3, n), vec(0u8..3, n)))
}

proptest! {
    #[test]
    fn identity_and_symmetry(u in word(), v in word()) {
        prop_assert_eq!(d_pref_ap(&u, &u), Distance::ZERO);
        prop_assert_eq!(d_pref_ap(&u, &v), d_pref_ap(&v, &u));
        prop_assert_eq!(d_ghamm(&u, &u), 0);
        prop_assert_eq!(d_ghamm(&u, &v), d_ghamm(&v, &u));
        prop_assert_eq!(d_lev(&u, &u).0, 0);
        prop_assert_eq!(d_lev(&u, &v).0, d_lev(&v, &u).0);
    }

    #[test]
    fn lev_witness_is_valid(u in word(), v in word()) {
        let (d, w) = d_lev(&u, &v);
        prop_assert_eq!(w.weight(), d);
        prop_assert!(w.validate(&u, &v).is_ok());
    }

    #[test]
    fn ordering_of_edit_distances((u, v) in pair_same_len()) {
        let h = hamming(&u, &v).unwrap();
        prop_assert!(d_lev(&u, &v).0 <= d_ghamm(&u, &v));
        prop_assert_eq!(d_ghamm(&u, &v), h);
        prop_assert_eq!(d_hamm(&u, &v).unwrap(), Distance::from_count(h));
    }

    #[test]
    fn triangle_inequality(u in word(), v in word(), w in word()) {
        prop_assert!(d_lev(&u, &w).0 <= d_lev(&u, &v).0 + d_lev(&v, &w).0);
        if u.len() == v.len() && v.len() == w.len() {
            prop_assert!(hamming(&u, &w).unwrap() <= hamming(&u, &v).unwrap() + hamming(&v, &w).unwrap());
        }
    }
}

#[test]
fn edit_sequence_example() {
    let s = |l: Option<char>, r: Option<char>| EditSymbol::new(l, r).unwrap();
    let gamma = EditSequence {
        symbols: vec![
            s(Some('a'), Some('a')),
            s(Some('b'), Some('c')),
            s(None, Some('c')),
            s(Some('b'), Some('b')),
            s(Some('c'), Some('c')),
        ],
    };
    let (u, v): (Vec<char>, Vec<char>) = ("abbc".chars().collect(), "accbc".chars().collect());
    assert_eq!(gamma.weight(), 2);
    assert!(gamma.validate(&u, &v).is_ok());
    assert_eq!(d_lev(&u, &v).0, 2);
    assert!(EditSymbol::<char>::new(None, None).is_err());
}
