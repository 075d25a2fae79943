class Child extends Missing {
    int x;
    void f() { x = 1; }
}
