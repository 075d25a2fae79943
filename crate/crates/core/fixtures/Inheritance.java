class A {
    int x;
    int y;

    void showxy() {
        System.out.println(" x and y : " + x + " " + y);
    }
}

class B extends A {
    int z;

    void showz() {
        System.out.println("z : " + z);
    }
}

class Inheritance {
    public static void main(String args[]) {
        A a = new A();
        B b = new B();
        a.x = 5;      // x of superclass A
        a.y = 5;      // y of superclass A
        a.showxy();   // showxy() of class A i.e. the superclass
        b.x = 10;     // x of subclass B as extended from A
        b.y = 10;     // y of subclass B as extended from A
        b.z = 10;     // z of own subclass B
        b.showxy();   // showxy of superclass A extended by subclass B
        b.showz();    // own method showz() of class B
    }
}
