//! Workloads shared by the benchmarks.

use portroster::asp::{parse_program, Program};

/// Three-colouring of a ring of `n` nodes.
pub fn colouring(n: usize) -> Program {
    let mut text = String::new();
    for i in 0..n {
        text.push_str(&format!("node({i}). edge({i},{}).\n", (i + 1) % n));
    }
    text.push_str(
        "col(r). col(g). col(b).\n\
         colour(X,C) :- node(X), col(C), not other(X,C).\n\
         other(X,C) :- node(X), col(C), col(D), colour(X,D), C != D.\n\
         :- edge(X,Y), colour(X,C), colour(Y,C).\n\
         coloured(X) :- colour(X,C).\n\
         :- node(X), not coloured(X).\n",
    );
    parse_program(&text).expect("colouring program parses")
}
