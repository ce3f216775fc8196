fn main() {
    std::process::exit(hbn::cli::run());
}
