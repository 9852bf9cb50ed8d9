// serial versus parallel field-kernel benchmark; filled in with the kernels module
int main() { return 0; }
