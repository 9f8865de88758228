use exlat::oracle::brute_force_relations;
use exlat::poly::special::cyclotomic;
use std::time::Instant;

fn main() {
    for p in [3u64, 5, 7, 11] {
        let f = cyclotomic(p);
        let t = Instant::now();
        let b = brute_force_relations(&f, 4, 100).unwrap();
        println!(
            "Phi_{}: rank {} index {:?} in {:.2?}",
            p,
            b.rank(),
            b.index_in_ambient(),
            t.elapsed()
        );
    }
}
