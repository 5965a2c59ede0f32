fn main() {
    std::process::exit(sievecluster_cli::run(std::env::args_os()));
}
