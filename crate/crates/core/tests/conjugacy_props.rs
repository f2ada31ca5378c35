use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subshift::conjugacy::{apply_code, image_of_set, swap_code, SetMap};
use subshift::fixtures;
use subshift::sets::{self, Flavor, SetExpr};
use subshift::shift::Shift;
use subshift::word::Word;

fn random_set(sh: &Shift, rng: &mut ChaCha8Rng) -> SetExpr {
    let ls = sh.alphabet.window(usize::MAX);
    let mut word = |n: usize| Word((0..rng.gen_range(0..=n)).map(|_| ls[rng.gen_range(0..ls.len())]).collect());
    let (a, b, c, d) = (word(2), word(2), word(1), word(2));
    let s = sets::c_set(sh, &a, &b).with_flavor(Flavor::U);
    if c.len() + d.len() > 1 {
        sets::union(sh, &s, &sets::c_set(sh, &c, &d))
    } else {
        s
    }
}

#[test]
fn set_images_preserve_boolean_operations() {
    let (src, dst) = (fixtures::golden_mean(), fixtures::golden_mean_00());
    let h = swap_code();
    let m = SetMap::new(&src, &dst, &h, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let (a, b) = (random_set(&src, &mut rng), random_set(&src, &mut rng));
        let (ia, ib) = (m.image(&a).unwrap(), m.image(&b).unwrap());
        let u = m.image(&sets::union(&src, &a, &b)).unwrap();
        let i = m.image(&sets::intersect(&src, &a, &b)).unwrap();
        let d = m.image(&sets::difference(&src, &a, &b)).unwrap();
        assert!(u.same_set(&sets::union(&dst, &ia, &ib)));
        assert!(i.same_set(&sets::intersect(&dst, &ia, &ib)));
        assert!(d.same_set(&sets::difference(&dst, &ia, &ib)));
    }
}

#[test]
fn set_images_match_point_images() {
    let (src, dst) = (fixtures::golden_mean(), fixtures::golden_mean_00());
    let h = swap_code();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let words: Vec<Word> = src.words_up_to(3, usize::MAX);
    for _ in 0..50 {
        let a = random_set(&src, &mut rng);
        let img = image_of_set(&src, &dst, &h, &a, 6).unwrap();
        for pre in &words {
            for per in words.iter().filter(|w| !w.is_empty()) {
                if !src.contains_point(pre, per) {
                    continue;
                }
                let code = |w: &Word| if w.is_empty() { Word::empty() } else { apply_code(&src, &h, w).unwrap() };
                let (hp, hq) = (code(pre), code(per));
                assert_eq!(sets::contains_point(&src, &a, pre, per), sets::contains_point(&dst, &img, &hp, &hq));
            }
        }
    }
}
