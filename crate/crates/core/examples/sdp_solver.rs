//! Building and solving linear matrix inequality programs directly.
use moment_sentinel::sdp::{psd_min_eigenvalue, solve, ConicProgram, Sense, Tolerances};
use nalgebra::DMatrix;

fn main() {
    // maximize t  s.t.  [[1, t], [t, 1]] ⪰ 0
    let mut p = ConicProgram::new(1, Sense::Maximize);
    let b = p.add_block(2);
    p.add_entry(b, 0, 0, None, 1.0);
    p.add_entry(b, 1, 1, None, 1.0);
    p.add_entry(b, 0, 1, Some(0), 1.0);
    p.set_objective(0, 1.0);
    let sol = solve(&p, Tolerances::default());
    println!("2x2 LMI: {} t* = {:.8}", sol.status, sol.free_values[0]);

    // Smallest eigenvalue as minimize ⟨C, X⟩ over trace(X) = 1, X ⪰ 0.
    let c = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
    let mut p = ConicProgram::new(6, Sense::Minimize);
    let b = p.add_block(3);
    let mut var = 0;
    let mut trace = Vec::new();
    for i in 0..3 {
        for j in i..3 {
            p.add_entry(b, i, j, Some(var), 1.0);
            if i == j {
                trace.push((var, 1.0));
            }
            var += 1;
        }
    }
    p.add_objective_block_term(b, &c);
    p.add_equality(trace, 1.0);
    let sol = solve(&p, Tolerances::default());
    println!(
        "min eigenvalue: {} {:.8} (dense eigensolver {:.8}, {} iterations)",
        sol.status,
        sol.objective(),
        psd_min_eigenvalue(&c).unwrap(),
        sol.iterations
    );
    println!(
        "certified gap {:.2e}",
        sol.primal_objective - sol.dual_objective
    );

    // The same program in the plain-text triplet form.
    println!("--- triplets ---\n{}", p.to_triplets());
}
