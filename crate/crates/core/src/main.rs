fn main() {
    std::process::exit(coxfold::cli::main_with_std());
}
