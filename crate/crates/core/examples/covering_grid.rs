//! Solves every covering instance with n <= 8 and l <= 3 and prints
//! the exact minimum sizes next to their lower bounds.
//!
//! Run with: cargo run --release --example covering_grid

use turanlab::cover::{solve_exact, turan_lower_bound, CoverInstance, DEFAULT_NODE_BUDGET};

fn main() {
    println!("{:>2} {:>2} {:>2} {:>6} {:>9} {:>8} {:>12}", "n", "k", "l", "size", "bound", "optimal", "nodes");
    for n in 1..=8 {
        for k in 1..=n {
            for l in 0..=k.min(3) {
                let inst = CoverInstance::new(n, k, l).expect("valid instance");
                let (exact, _) = turan_lower_bound(inst);
                let start = std::time::Instant::now();
                let result = solve_exact(inst, DEFAULT_NODE_BUDGET).expect("within guards");
                let elapsed = start.elapsed();
                println!(
                    "{:>2} {:>2} {:>2} {:>6} {:>9} {:>8} {:>12} ({:.2?})",
                    n, k, l, result.size, exact.to_string(), result.optimal, result.nodes_explored, elapsed
                );
            }
        }
    }
}
