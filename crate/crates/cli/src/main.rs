fn main() {
    // Placeholder until the command surface lands.
    eprintln!("pca: not yet wired up");
    std::process::exit(1);
}
