use weylspec::spectra::{spectrum_exceptional, Strategy};
use weylspec::invariants;
fn main() {
    let s = spectrum_exceptional("E7".parse().unwrap(), Strategy::Enumerate).unwrap();
    println!("E7: {} polys", s.len());
    for d in [18, 16, 14, 9, 7] {
        println!("m_{d} = {}, m'_{d} = {}", invariants::m(&s, d), invariants::m_prime(&s, d));
    }
}
