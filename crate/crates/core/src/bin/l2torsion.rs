fn main() {
    std::process::exit(l2torsion::cli::main());
}
