#include <theta/theta.hpp>
int main() { return 0; }
