fn main() {
    std::process::exit(treelab::cli::run(std::env::args_os(), std::env::vars().collect()));
}
