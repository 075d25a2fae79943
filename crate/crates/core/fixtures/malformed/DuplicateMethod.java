class Dup {
    int a;
    void f(int x) { a = x; }
    void f(int y) { a = y; }
}
