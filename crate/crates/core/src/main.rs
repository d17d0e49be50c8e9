fn main() {
    std::process::exit(softdec::cli::main());
}
