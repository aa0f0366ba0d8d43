#include "wtpolar/wtpolar.hpp"
#include <cstdio>
int main(){ std::puts("demo"); }
