fn main() {
    std::process::exit(seqtag::cli::run(std::env::args_os()));
}
