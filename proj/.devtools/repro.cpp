#include <cmath>
#include <cstdio>
#include <algorithm>
static long evals = 0;
static int maxdepth = 0;
double L(double x){ // sparse gaussian p=.5
    double t = x*x; // v=2 -> v x^2/2 = x^2
    double a = std::log(0.5) + t;   // gaussian term
    double b = std::log(0.5);       // atom at 0
    double m = std::max(a,b);
    return m + std::log(std::exp(a-m)+std::exp(b-m));
}
double zeta = 1.0 + 1e-8;
double f(double x){ ++evals; return x*x*std::exp(L(x) - zeta*x*x); }
double simpson(double h, double fa, double fm, double fb){ return h/6.0*(fa+4.0*fm+fb); }
double adapt(double a,double b,double fa,double fm,double fb,double whole,double eps,int depth){
    maxdepth = std::max(maxdepth, 60-depth);
    double m=0.5*(a+b), lm=0.5*(a+m), rm=0.5*(m+b);
    double flm=f(lm), frm=f(rm);
    double left=simpson(m-a,fa,flm,fm), right=simpson(b-m,fm,frm,fb);
    double delta=left+right-whole;
    if (std::abs(delta)<=15.0*eps || depth<=0) return left+right+delta/15.0;
    return adapt(a,m,fa,flm,fm,left,0.5*eps,depth-1)+adapt(m,b,fm,frm,fb,right,0.5*eps,depth-1);
}
int main(){
    double R = std::sqrt(45.0/1e-8);
    double fa=f(0), fb=f(R), m=R/2, fm=f(m);
    double whole=simpson(R,fa,fm,fb);
    double scale=0; for(int i=0;i<=8;++i) scale+=std::abs(f(R*i/8.0)); scale = std::max(scale*R/9.0, std::abs(whole));
    double eps=1e-10*scale;
    std::printf("R=%g whole=%g scale=%g eps=%g\n", R, whole, scale, eps);
    double v=adapt(0,R,fa,fm,fb,whole,eps,60);
    std::printf("v=%g evals=%ld maxdepth=%d\n", v, evals, maxdepth);
}
