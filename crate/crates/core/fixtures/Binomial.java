class Poly {
    int coef;
    int deg;

    Poly(int a, int b) {
        coef = a;
        deg = b;
    }

    double eval(double x) {
        double p = 1;
        for (int i = 0; i < deg; i++) {
            p = p * x;
        }
        return coef * p;
    }

    void add(Poly b) {
        coef = coef + b.coef;
    }

    void mult(Poly b) {
        coef = coef * b.coef;
        deg = deg + b.deg;
    }

    public String toString() {
        return coef + "x^" + deg;
    }
}

public class Binomial {
    public static void main(String[] args) {
        int N = Integer.parseInt(args[0]);
        double p = Double.parseDouble(args[1]);
        Poly y = new Poly(1, 0);
        Poly t = new Poly(1, 0);
        t.add(new Poly(1, 1));
        for (int i = 0; i < N; i++) {
            y.mult(t);
            System.out.println(y + "");
        }
        System.out.println("value: " + y.eval(p));
    }
}
