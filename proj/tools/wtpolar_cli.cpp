#include "wtpolar/wtpolar.hpp"
int main(){ return 0; }
