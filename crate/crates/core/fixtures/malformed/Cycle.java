class A extends B {
    int x;
}

class B extends A {
    int y;
}
