fn main() {
    std::process::exit(ncminors::run());
}
