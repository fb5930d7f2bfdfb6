//! Driving the command-line front end in-process.

fn main() {
    let job = r#"{"field": {"p": 5, "s": 1, "n": 3}, "module": [[0, 1], 0, 1, [0, 1]]}"#;
    for cmd in ["info", "frobenius-charpoly"] {
        drinfeld::cli::main_with_args(["drinfeld", "--pretty", "--job", job, cmd]);
    }
    let norm = r#"{"field": {"p": 5, "n": 3}, "module": [[0, 1], 0, 1, [0, 1]], "frobenius": true}"#;
    drinfeld::cli::main_with_args(["drinfeld", "--job", norm, "norm"]);
    drinfeld::cli::main_with_args(["drinfeld", "jinv-params", "--rank", "4", "--q", "5", "--count-only"]);
    drinfeld::cli::main_with_args(["drinfeld", "bench", "--grid", "3:2,6:3", "--trials", "3"]);
}
