fn main() {
    println!("discpack");
}
